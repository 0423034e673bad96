use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExactComplex, ExactRational, MultiIndex};
use crate::error::{Error, Result};

/// Sparse polynomial in `dimension` variables with Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, and terms iterate in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    dimension: usize,
    #[serde(with = "terms_serde")]
    terms: BTreeMap<MultiIndex, ExactComplex>,
}

impl Polynomial {
    pub fn zero(dimension: usize) -> Self {
        assert!(dimension > 0, "polynomials need at least one variable");
        Polynomial { dimension, terms: BTreeMap::new() }
    }

    pub fn constant(dimension: usize, c: ExactComplex) -> Self {
        let mut p = Polynomial::zero(dimension);
        p.add_term(MultiIndex::zero(dimension), c);
        p
    }

    pub fn one(dimension: usize) -> Self {
        Polynomial::constant(dimension, ExactComplex::one())
    }

    pub fn monomial(alpha: MultiIndex, c: ExactComplex) -> Self {
        let mut p = Polynomial::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, ExactComplex)>,
    {
        let mut p = Polynomial::zero(dimension);
        for (alpha, c) in terms {
            if alpha.dim() != dimension {
                return Err(Error::DimensionMismatch { left: dimension, right: alpha.dim() });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&ExactComplex> {
        self.terms.get(alpha)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ExactComplex)> {
        self.terms.iter()
    }

    /// Adds `c·z^α`, dropping the term if the sum cancels.
    ///
    /// Panics if `alpha` has the wrong length; use [`Polynomial::from_terms`] for checked input.
    pub fn add_term(&mut self, alpha: MultiIndex, c: ExactComplex) {
        assert_eq!(alpha.dim(), self.dimension, "multi-index length must match dimension");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.add_term(alpha.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dimension);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &ExactComplex) -> Polynomial {
        let mut out = Polynomial::zero(self.dimension);
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), c * k);
        }
        out
    }

    pub fn scale_real(&self, k: &ExactRational) -> Polynomial {
        self.scale(&ExactComplex::real(k.clone()))
    }

    /// `φ(λz)` for a Gaussian-rational `λ`: multiplies each coefficient by `λ^{|α|}`.
    pub fn dilate(&self, lambda: &ExactComplex) -> Polynomial {
        let mut out = Polynomial::zero(self.dimension);
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), c * &lambda.pow(alpha.degree() as u32));
        }
        out
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch { left: self.dimension, right: other.dimension });
        }
        Ok(())
    }
}

mod terms_serde {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{ExactComplex, MultiIndex};

    pub fn serialize<S: Serializer>(
        terms: &BTreeMap<MultiIndex, ExactComplex>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<(&MultiIndex, &ExactComplex)> = terms.iter().collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<MultiIndex, ExactComplex>, D::Error> {
        let v: Vec<(MultiIndex, ExactComplex)> = Vec::deserialize(d)?;
        Ok(v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}
