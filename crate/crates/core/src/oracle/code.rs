use std::fmt::Write as _;

use crate::field::{ExtensionField, Field};
use crate::matrix::Matrix;
use crate::params::CodeParams;
use crate::space::{decode_index, BlockVector, Space};

use super::OracleError;

/// A finite set of vectors, stored by index in the common space indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitCode {
    params: CodeParams,
    words: Vec<u64>,
    generator: Option<Vec<u64>>,
}

impl ExplicitCode {
    /// Arbitrary (not necessarily linear) code; duplicates are dropped.
    pub fn new(params: CodeParams, mut words: Vec<u64>) -> Result<Self, OracleError> {
        if words.is_empty() {
            return Err(OracleError::Empty);
        }
        words.sort_unstable();
        words.dedup();
        Ok(ExplicitCode {
            params,
            words,
            generator: None,
        })
    }

    /// `F_{q^m}`-span of the generator rows.
    pub fn linear_span(
        space: &Space,
        ext: &ExtensionField,
        generator: Vec<u64>,
    ) -> Result<Self, OracleError> {
        let mut words = vec![0u64];
        for &g in &generator {
            let multiples: Vec<u64> = (0..ext.order() as u32)
                .map(|a| space.scale(ext, a, g))
                .collect();
            words = words
                .iter()
                .flat_map(|&w| multiples.iter().map(move |&x| (w, x)))
                .map(|(w, x)| space.add(w, x))
                .collect();
        }
        words.sort_unstable();
        words.dedup();
        let expected = (ext.order() as u128).pow(generator.len() as u32);
        if words.len() as u128 != expected {
            return Err(OracleError::Dependent);
        }
        Ok(ExplicitCode {
            params: space.params(),
            words,
            generator: Some(generator),
        })
    }

    /// The whole space as a linear code of dimension `n`.
    pub fn full_space(space: &Space) -> Result<Self, OracleError> {
        let ext = space.extension_field()?;
        let n = space.params().n() as usize;
        let generator = (0..n)
            .map(|j| {
                let mut coords = vec![0u32; n];
                coords[j] = 1;
                space.from_coordinates(&coords)
            })
            .collect();
        Self::linear_span(space, &ext, generator)
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    /// Codeword indices, sorted.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.generator.is_some()
    }

    pub fn generator(&self) -> Option<&[u64]> {
        self.generator.as_deref()
    }

    pub fn dimension(&self) -> Option<u32> {
        self.generator.as_ref().map(|g| g.len() as u32)
    }

    pub fn codewords(&self) -> Vec<BlockVector> {
        self.words
            .iter()
            .map(|&w| decode_index(self.params, w))
            .collect()
    }

    /// Same words read under another block structure of the same space.
    pub fn regrouped(&self, params: CodeParams) -> Self {
        assert_eq!(
            (params.q(), params.m(), params.n()),
            (self.params.q(), self.params.m(), self.params.n())
        );
        ExplicitCode {
            params,
            ..self.clone()
        }
    }

    fn digit_width(q: u64) -> usize {
        if q <= 16 {
            1
        } else {
            format!("{:x}", q - 1).len()
        }
    }

    /// Text form: a `q m eta ell` header, then one codeword per line with the
    /// entries of each block in row-major order as hex digits and blocks
    /// separated by `|`.
    pub fn to_text(&self) -> String {
        let p = self.params;
        let width = Self::digit_width(p.q());
        let mut out = format!("{} {} {} {}\n", p.q(), p.m(), p.eta(), p.ell());
        for v in self.codewords() {
            let blocks: Vec<String> = v
                .blocks()
                .iter()
                .map(|b| {
                    let mut s = String::new();
                    for &e in b.entries() {
                        write!(s, "{e:0width$x}").unwrap();
                    }
                    s
                })
                .collect();
            out.push_str(&blocks.join("|"));
            out.push('\n');
        }
        out
    }

    /// Parses [`ExplicitCode::to_text`] output. The result is not marked
    /// linear even if the words form a subspace.
    pub fn from_text(text: &str) -> Result<Self, OracleError> {
        let bad = |msg: &str| OracleError::Parse(msg.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header is not numeric")))
            .collect::<Result<_, _>>()?;
        let [q, m, eta, ell] = header[..] else {
            return Err(bad("header needs q m eta ell"));
        };
        let params = CodeParams::new(q, m as u32, eta as u32, ell as u32)
            .map_err(|e| OracleError::Parse(e.to_string()))?;
        let width = Self::digit_width(q);
        let (rows, cols) = (m as usize, eta as usize);
        let block_order = q.pow((m * eta) as u32);
        let mut words = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.trim().split('|').collect();
            if parts.len() != ell as usize {
                return Err(bad("wrong number of blocks"));
            }
            let mut index = 0u64;
            for part in parts.iter().rev() {
                if part.len() != rows * cols * width {
                    return Err(bad("wrong block length"));
                }
                let mut block = Matrix::zeros(rows, cols);
                for k in 0..rows * cols {
                    let digit = u64::from_str_radix(&part[k * width..(k + 1) * width], 16)
                        .map_err(|_| bad("bad hex digit"))?;
                    if digit >= q {
                        return Err(bad("entry out of range"));
                    }
                    block.set(k / cols, k % cols, digit as u32);
                }
                index = index * block_order + block.to_block_index(q);
            }
            words.push(index);
        }
        ExplicitCode::new(params, words)
    }
}
