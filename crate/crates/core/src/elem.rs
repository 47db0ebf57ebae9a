//! Sparse rational linear combinations of canonical symmetric words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::EngineError;
use crate::graded::{normalize_word, BasisRef, GradedBasis, Shift, SymWord};

/// Exact coefficient type. Equality against zero is exact; nothing in the
/// engine ever floats.
pub type Coeff = BigRational;

pub fn coeff_int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn coeff_ratio(num: i64, den: i64) -> Coeff {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Sparse element of the graded symmetric algebra under a declared shift.
///
/// All stored words share the element's shift; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elem {
    basis: BasisRef,
    shift: Shift,
    terms: BTreeMap<SymWord, Coeff>,
}

impl Elem {
    pub fn zero(basis: BasisRef, shift: Shift) -> Self {
        Elem {
            basis,
            shift,
            terms: BTreeMap::new(),
        }
    }

    /// The unit of the symmetric algebra: the empty word with coefficient 1.
    pub fn unit(basis: BasisRef, shift: Shift) -> Self {
        let mut e = Elem::zero(basis, shift);
        e.add_term(SymWord::empty(), Coeff::one());
        e
    }

    /// Builds `coeff * word` from an already-canonical word.
    pub fn from_word(basis: BasisRef, shift: Shift, word: SymWord, coeff: Coeff) -> Self {
        let mut e = Elem::zero(basis, shift);
        e.add_term(word, coeff);
        e
    }

    /// Builds `coeff * (factors as a word)`, normalizing order and sign.
    pub fn from_factors(basis: BasisRef, shift: Shift, factors: &[u32], coeff: Coeff) -> Self {
        let mut e = Elem::zero(basis.clone(), shift);
        if let Some((word, sign)) = normalize_word(&basis, shift, factors) {
            e.add_term(word, coeff * coeff_int(sign as i64));
        }
        e
    }

    /// Convenience for tests and parsing: factors given by id.
    pub fn from_ids(
        basis: BasisRef,
        shift: Shift,
        ids: &[&str],
        coeff: Coeff,
    ) -> Result<Self, EngineError> {
        let mut factors = Vec::with_capacity(ids.len());
        for id in ids {
            factors.push(
                basis
                    .index_of(id)
                    .ok_or_else(|| EngineError::UnknownId((*id).to_string()))?,
            );
        }
        Ok(Elem::from_factors(basis, shift, &factors, coeff))
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn shift(&self) -> Shift {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymWord, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: &SymWord) -> Coeff {
        self.terms.get(word).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Adds `coeff * word` in place, pruning the term if it cancels.
    pub fn add_term(&mut self, word: SymWord, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &Elem) -> Result<(), EngineError> {
        if !GradedBasis::same(&self.basis, &other.basis) {
            return Err(EngineError::BasisMismatch);
        }
        if self.shift != other.shift {
            return Err(EngineError::ShiftMismatch {
                expected: self.shift.0,
                got: other.shift.0,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Elem) -> Result<Elem, EngineError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Elem) -> Result<(), EngineError> {
        self.compatible(other)?;
        for (w, c) in other.terms() {
            self.add_term(w.clone(), c.clone());
        }
        Ok(())
    }

    pub fn sub(&self, other: &Elem) -> Result<Elem, EngineError> {
        self.add(&other.scale(&coeff_int(-1)))
    }

    pub fn scale(&self, c: &Coeff) -> Elem {
        if c.is_zero() {
            return Elem::zero(self.basis.clone(), self.shift);
        }
        Elem {
            basis: self.basis.clone(),
            shift: self.shift,
            terms: self
                .terms
                .iter()
                .map(|(w, k)| (w.clone(), k * c))
                .collect(),
        }
    }

    /// Graded-symmetric product: concatenates factor multisets and
    /// renormalizes, term by term.
    pub fn sym_product(&self, other: &Elem) -> Result<Elem, EngineError> {
        self.compatible(other)?;
        let mut out = Elem::zero(self.basis.clone(), self.shift);
        for (wa, ca) in self.terms() {
            for (wb, cb) in other.terms() {
                let mut factors = Vec::with_capacity(wa.weight() + wb.weight());
                factors.extend_from_slice(wa.factors());
                factors.extend_from_slice(wb.factors());
                if let Some((word, sign)) = normalize_word(&self.basis, self.shift, &factors) {
                    out.add_term(word, ca * cb * coeff_int(sign as i64));
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a single canonical word.
    pub fn mul_word(&self, word: &SymWord) -> Elem {
        let rhs = Elem::from_word(self.basis.clone(), self.shift, word.clone(), Coeff::one());
        self.sym_product(&rhs).expect("same basis and shift")
    }

    /// Reinterprets every word under a new shift. Word content and
    /// coefficients are kept as they are (the basis-level reinterpretation
    /// sign is +1 by convention); words that acquire a repeated odd factor
    /// under the new parity are dropped, since they vanish there.
    pub fn reshift(&self, new_shift: Shift) -> Elem {
        let mut out = Elem::zero(self.basis.clone(), new_shift);
        for (w, c) in self.terms() {
            if let Some((word, sign)) = normalize_word(&self.basis, new_shift, w.factors()) {
                debug_assert_eq!(sign, 1, "canonical order is shift-independent");
                out.add_term(word, c.clone());
            }
        }
        out
    }

    /// The common degree of all stored words, if the element is homogeneous
    /// and nonzero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| w.degree(&self.basis, self.shift));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// True when every stored word has the given degree (zero passes).
    pub fn is_homogeneous_of(&self, degree: i64) -> bool {
        self.terms
            .keys()
            .all(|w| w.degree(&self.basis, self.shift) == degree)
    }

    /// Restriction to words of one weight.
    pub fn weight_part(&self, weight: usize) -> Elem {
        Elem {
            basis: self.basis.clone(),
            shift: self.shift,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Weights present in the element.
    pub fn weights(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|w| w.weight()).collect()
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(|w| w.weight()).max().unwrap_or(0)
    }
}

fn format_coeff(c: &Coeff) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
                if c.is_negative() {
                    write!(f, "- {} ", format_coeff(&c.abs()))?;
                } else {
                    write!(f, "+ {} ", format_coeff(c))?;
                }
            } else {
                write!(f, "{} ", format_coeff(c))?;
            }
            write!(f, "{}", w.display(&self.basis))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::enumerate_words_up_to;

    fn basis3() -> BasisRef {
        // mixed degrees so both parities occur under either unit shift
        GradedBasis::from_pairs(&[("x", 0), ("y", 0), ("z", 1)]).unwrap()
    }

    fn word(basis: &BasisRef, shift: Shift, ids: &[&str]) -> Elem {
        Elem::from_ids(basis.clone(), shift, ids, Coeff::one()).unwrap()
    }

    #[test]
    fn unit_is_neutral_for_product() {
        let b = basis3();
        let a = word(&b, Shift(-1), &["x", "z"]);
        let one = Elem::unit(b.clone(), Shift(-1));
        assert_eq!(a.sym_product(&one).unwrap(), a);
        assert_eq!(one.sym_product(&a).unwrap(), a);
    }

    #[test]
    fn graded_commutativity_on_basis_words() {
        let b = basis3();
        let shift = Shift(-1);
        for wa in enumerate_words_up_to(&b, shift, 2) {
            for wb in enumerate_words_up_to(&b, shift, 2) {
                let a = Elem::from_word(b.clone(), shift, wa.clone(), Coeff::one());
                let c = Elem::from_word(b.clone(), shift, wb.clone(), Coeff::one());
                let da = wa.degree(&b, shift);
                let db = wb.degree(&b, shift);
                let sign = if crate::graded::is_odd(da) && crate::graded::is_odd(db) {
                    -1
                } else {
                    1
                };
                let lhs = a.sym_product(&c).unwrap();
                let rhs = c.sym_product(&a).unwrap().scale(&coeff_int(sign));
                assert_eq!(lhs, rhs, "{} vs {}", wa.display(&b), wb.display(&b));
            }
        }
    }

    #[test]
    fn associativity_by_direct_expansion() {
        let b = GradedBasis::from_pairs(&[("a", -1), ("b", 0), ("c", 2)]).unwrap();
        let shift = Shift(-1);
        let words = enumerate_words_up_to(&b, shift, 2);
        for wa in &words {
            for wb in &words {
                for wc in &words {
                    let x = Elem::from_word(b.clone(), shift, wa.clone(), coeff_int(2));
                    let y = Elem::from_word(b.clone(), shift, wb.clone(), coeff_ratio(1, 3));
                    let z = Elem::from_word(b.clone(), shift, wc.clone(), Coeff::one());
                    let left = x.sym_product(&y).unwrap().sym_product(&z).unwrap();
                    let right = x.sym_product(&y.sym_product(&z).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn odd_square_is_zero_in_product() {
        let b = basis3();
        let x = word(&b, Shift(1), &["x"]);
        assert!(x.sym_product(&x).unwrap().is_zero());
    }

    #[test]
    fn shift_mismatch_is_an_error() {
        let b = basis3();
        let a = word(&b, Shift(1), &["x"]);
        let c = word(&b, Shift(-1), &["y"]);
        assert!(a.add(&c).is_err());
        assert!(a.sym_product(&c).is_err());
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let b1 = basis3();
        let b2 = GradedBasis::from_pairs(&[("u", 0)]).unwrap();
        let a = word(&b1, Shift(1), &["x"]);
        let c = word(&b2, Shift(1), &["u"]);
        assert!(a.add(&c).is_err());
    }

    #[test]
    fn reshift_same_shift_is_identity() {
        let b = basis3();
        let a = word(&b, Shift(1), &["x", "y"]).scale(&coeff_ratio(3, 2));
        assert_eq!(a.reshift(Shift(1)), a);
    }

    #[test]
    fn reshift_recomputes_degrees() {
        let b = basis3();
        // weight-2 word of native degrees (0,0) at shift -1 has degree 2
        let a = word(&b, Shift(-1), &["x", "y"]);
        assert_eq!(a.homogeneous_degree(), Some(2));
        assert_eq!(a.reshift(Shift(1)).homogeneous_degree(), Some(-2));
    }

    #[test]
    fn reshift_round_trip_preserves_terms() {
        let b = basis3();
        let words = enumerate_words_up_to(&b, Shift(1), 3);
        let mut e = Elem::zero(b.clone(), Shift(1));
        for (i, w) in words.iter().enumerate() {
            e.add_term(w.clone(), coeff_int(i as i64 + 1) * coeff_ratio(1, 7));
        }
        let round = e.reshift(Shift(-1)).reshift(Shift(1));
        assert_eq!(round, e);
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let b = basis3();
        let a = word(&b, Shift(1), &["x"]);
        let minus = a.scale(&coeff_int(-1));
        let sum = a.add(&minus).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.terms().count(), 0);
    }

    #[test]
    fn display_is_deterministic() {
        let b = basis3();
        let mut e = word(&b, Shift(-1), &["x", "y"]).scale(&coeff_ratio(-3, 2));
        e.add_assign(&word(&b, Shift(-1), &["z"])).unwrap();
        assert_eq!(format!("{}", e), "-3/2 x.y + 1 z");
    }
}
