//! Exact Grassmann algebra over a fixed generator set, and the Koszul-signed
//! algebra of Grassmann-coefficient operators on one or two fermion modes.
//!
//! Monomials are bitmasks over generator indices; bit order is the declared
//! generator order, and every sign is the parity of the permutation that
//! sorts a product into that order.

mod element;
pub mod relations;
mod superop;

pub use element::{GrassmannElement, Monomial};
pub use superop::{FermionModes, FockMatrix, SuperOperator};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported number of generators (one bit each in a `u64`).
pub const MAX_GENERATORS: usize = 64;

/// Ordered generator labels with an involutive conjugation pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    labels: Vec<String>,
    partner: Vec<usize>,
}

impl GeneratorSet {
    /// `partners[i]` is the index of the conjugate of generator `i`.
    pub fn new(labels: Vec<String>, partners: Vec<usize>) -> Result<Arc<Self>> {
        if labels.len() > MAX_GENERATORS {
            return Err(Error::InvalidGenerators(format!(
                "{} generators, at most {MAX_GENERATORS} supported",
                labels.len()
            )));
        }
        if partners.len() != labels.len() {
            return Err(Error::InvalidGenerators("one partner per label required".into()));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidGenerators(format!("duplicate label `{label}`")));
            }
            match partners.get(partners[i]) {
                Some(&back) if back == i => {}
                _ => return Err(Error::InvalidGenerators(format!("conjugation of `{label}` is not an involution"))),
            }
        }
        Ok(Arc::new(Self { labels, partner: partners }))
    }

    /// Declares `x₁, x₁*, x₂, x₂*, …` in that order from `(x, x*)` pairs.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Arc<Self>> {
        let mut labels = Vec::with_capacity(2 * pairs.len());
        let mut partners = Vec::with_capacity(2 * pairs.len());
        for (k, (x, xc)) in pairs.iter().enumerate() {
            labels.push(x.to_string());
            labels.push(xc.to_string());
            partners.push(2 * k + 1);
            partners.push(2 * k);
        }
        Self::new(labels, partners)
    }

    /// `α, α*`.
    pub fn one_mode() -> Arc<Self> {
        Self::from_pairs(&[("α", "α*")]).expect("static generator set")
    }

    /// `α, α*, β, β*`.
    pub fn two_mode() -> Arc<Self> {
        Self::from_pairs(&[("α", "α*"), ("β", "β*")]).expect("static generator set")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn partner(&self, index: usize) -> usize {
        self.partner[index]
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

pub(crate) fn same_set(a: &Arc<GeneratorSet>, b: &Arc<GeneratorSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_declare_partners() {
        let g = GeneratorSet::two_mode();
        assert_eq!(g.labels(), ["α", "α*", "β", "β*"]);
        assert_eq!(g.partner(0), 1);
        assert_eq!(g.partner(3), 2);
        assert_eq!(g.index_of("β").unwrap(), 2);
        assert!(matches!(g.index_of("γ"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn rejects_bad_sets() {
        let dup = GeneratorSet::from_pairs(&[("α", "α*"), ("α", "β")]);
        assert!(matches!(dup, Err(Error::InvalidGenerators(_))));
        let not_involution = GeneratorSet::new(vec!["x".into(), "y".into(), "z".into()], vec![1, 2, 0]);
        assert!(matches!(not_involution, Err(Error::InvalidGenerators(_))));
        let out_of_range = GeneratorSet::new(vec!["x".into()], vec![3]);
        assert!(out_of_range.is_err());
    }

    #[test]
    fn self_conjugate_generator_allowed() {
        let g = GeneratorSet::new(vec!["θ".into()], vec![0]).unwrap();
        assert_eq!(g.partner(0), 0);
    }
}
