//! Deterministic generators and independent oracles shared by the unit and
//! acceptance suites. Not part of the engine proper.

use num_traits::One;

use crate::elem::{coeff_int, Coeff, Elem};
use crate::graded::{enumerate_words, BasisRef, GradedBasis, SymWord};
use crate::polymap::{PolyMap, INPUT_SHIFT, OUTPUT_SHIFT};

/// Tiny splitmix64 generator: reproducible across platforms, no
/// dependencies, good enough for sampling test cases.
#[derive(Debug, Clone)]
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Small nonzero rational with numerator in -3..=3 and denominator 1 or 2.
    pub fn small_coeff(&mut self) -> Coeff {
        let numer = loop {
            let n = self.below(7) as i64 - 3;
            if n != 0 {
                break n;
            }
        };
        let denom = 1 + self.below(2) as i64;
        crate::elem::coeff_ratio(numer, denom)
    }
}

/// Random basis of dimension 1..=3 with degrees drawn from {-1, 0, 1, 2}.
pub fn random_basis(rng: &mut TestRng) -> BasisRef {
    let names = ["a", "b", "c"];
    let dim = 1 + rng.below(3);
    let pairs: Vec<(&str, i64)> = (0..dim)
        .map(|i| (names[i], rng.below(4) as i64 - 1))
        .collect();
    GradedBasis::from_pairs(&pairs).unwrap()
}

/// Random homogeneous element of the given degree assembled from words of
/// weight up to `max_weight`; may come out zero when no word fits.
pub fn random_homogeneous_elem(
    basis: &BasisRef,
    degree: i64,
    max_weight: usize,
    rng: &mut TestRng,
) -> Elem {
    let mut out = Elem::zero(basis.clone(), OUTPUT_SHIFT);
    for weight in 0..=max_weight {
        for word in enumerate_words(basis, OUTPUT_SHIFT, weight) {
            if word.degree(basis, OUTPUT_SHIFT) == degree && rng.below(3) == 0 {
                out.add_term(word, rng.small_coeff());
            }
        }
    }
    out
}

/// Random sparse degree-homogeneous operator table with arities in
/// `1..=max_arity` and outputs of weight up to `max_out_weight`.
pub fn random_polymap(
    basis: &BasisRef,
    degree: i64,
    max_arity: usize,
    max_out_weight: usize,
    rng: &mut TestRng,
) -> PolyMap {
    let mut map = PolyMap::new(basis.clone(), degree);
    for arity in 1..=max_arity {
        for word in enumerate_words(basis, INPUT_SHIFT, arity) {
            if rng.below(3) != 0 {
                continue;
            }
            let target = word.degree(basis, INPUT_SHIFT) + degree + 2;
            let value = random_homogeneous_elem(basis, target, max_out_weight, rng);
            if !value.is_zero() {
                map.add_entry(word, value).unwrap();
            }
        }
    }
    map
}

/// Structure constants of a binary bracket read back from an arity-2 table,
/// for the brute-force Jacobi oracle below.
pub struct BinaryBracket {
    basis: BasisRef,
    map: PolyMap,
}

impl BinaryBracket {
    pub fn new(map: PolyMap) -> Self {
        BinaryBracket {
            basis: map.basis().clone(),
            map,
        }
    }

    /// `[u, v]` straight from the table, as an output-shift element.
    pub fn bracket(&self, u: u32, v: u32) -> Elem {
        self.map.eval_factors(&[u, v])
    }

    /// Graded Jacobi defect `[a,[b,c]] - [[a,b],c] - (-1)^{|a||b|}[b,[a,c]]`
    /// computed by direct expansion over structure constants, entirely
    /// outside the bracket engine. Native degrees drive the sign.
    pub fn jacobi_defect(&self, a: u32, b: u32, c: u32) -> Elem {
        let expand = |inner: &Elem, outer: u32, outer_first: bool| -> Elem {
            let mut acc = Elem::zero(self.basis.clone(), OUTPUT_SHIFT);
            for (w, coeff) in inner.terms() {
                assert_eq!(w.weight(), 1, "binary bracket output must be weight 1");
                let v = w.factors()[0];
                let term = if outer_first {
                    self.bracket(outer, v)
                } else {
                    self.bracket(v, outer)
                };
                acc.add_assign(&term.scale(coeff)).unwrap();
            }
            acc
        };
        let da = self.basis.degree(a);
        let db = self.basis.degree(b);
        let mut defect = expand(&self.bracket(b, c), a, true);
        defect
            .add_assign(&expand(&self.bracket(a, b), c, false).scale(&coeff_int(-1)))
            .unwrap();
        let sign = if crate::graded::is_odd(da) && crate::graded::is_odd(db) {
            -1
        } else {
            1
        };
        defect
            .add_assign(&expand(&self.bracket(a, c), b, true).scale(&coeff_int(-sign)))
            .unwrap();
        defect
    }

    /// True when the graded Jacobi identity holds on every basis triple.
    pub fn jacobi_holds(&self) -> bool {
        let dim = self.basis.dim() as u32;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    if !self.jacobi_defect(a, b, c).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Random nonzero multivector of bounded weight over the desuspended basis:
/// not degree-homogeneous in general, so samplers filter as needed.
pub fn random_multivector(basis: &BasisRef, max_weight: usize, rng: &mut TestRng) -> Elem {
    let mut out = Elem::zero(basis.clone(), OUTPUT_SHIFT);
    let words: Vec<SymWord> = (1..=max_weight)
        .flat_map(|w| enumerate_words(basis, OUTPUT_SHIFT, w))
        .collect();
    if words.is_empty() {
        return out;
    }
    let picks = 1 + rng.below(3);
    for _ in 0..picks {
        let w = words[rng.below(words.len())].clone();
        out.add_term(w, rng.small_coeff());
    }
    out
}

/// Random homogeneous multivector of one weight; `None` when no word of the
/// weight exists.
pub fn random_multivector_of_weight(
    basis: &BasisRef,
    weight: usize,
    rng: &mut TestRng,
) -> Option<Elem> {
    let words = enumerate_words(basis, OUTPUT_SHIFT, weight);
    if words.is_empty() {
        return None;
    }
    let mut out = Elem::zero(basis.clone(), OUTPUT_SHIFT);
    let w = words[rng.below(words.len())].clone();
    out.add_term(w, Coeff::one());
    Some(out)
}
