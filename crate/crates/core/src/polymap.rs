//! Sparse multilinear operator tables and the graded Lie bracket on them.
//!
//! A [`PolyMap`] stores, per input arity m, a table from canonical weight-m
//! input words (read under the [1]-shift) to output elements (read under the
//! [-1]-shift). Its declared degree is the degree in the twice-suspended
//! operator space: a table entry at input word `w` maps to outputs of degree
//! `deg(w) + degree + 2`.
//!
//! The bracket is the graded commutator of the circle product. Evaluating
//! `(f o g)` on a word sums over (k,l)-shuffles of the factors: `g` eats the
//! tail block, one factor of its output is split off through the symmetric
//! coalgebra and fed to `f` as a final argument, and the remainder multiplies
//! the result. Signs are the Koszul sign of the shuffle plus `|g|` times the
//! degree of the head block; the coalgebra split contributes the Koszul sign
//! of moving the extracted factor to the front.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::elem::{coeff_int, Coeff, Elem};
use crate::error::EngineError;
use crate::graded::{
    enumerate_words, is_odd, koszul_sign, normalize_word, shuffles, BasisRef, GradedBasis, Shift,
    SymWord,
};
use crate::report::{TruncationPolicy, VerificationReport};

/// Shift under which input words are read.
pub const INPUT_SHIFT: Shift = Shift(1);
/// Shift under which output elements are read.
pub const OUTPUT_SHIFT: Shift = Shift(-1);

/// Degree-homogeneous sparse element of the operator Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    basis: BasisRef,
    degree: i64,
    comps: BTreeMap<usize, BTreeMap<SymWord, Elem>>,
}

impl PolyMap {
    pub fn new(basis: BasisRef, degree: i64) -> Self {
        PolyMap {
            basis,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    /// Declared degree in the twice-suspended operator space.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.comps.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.comps.keys().max().copied().unwrap_or(0)
    }

    pub fn component(&self, arity: usize) -> Option<&BTreeMap<SymWord, Elem>> {
        self.comps.get(&arity)
    }

    /// Input/output support as sorted (arity, output weight) pairs.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (&m, table) in &self.comps {
            for val in table.values() {
                for n in val.weights() {
                    out.insert((m, n));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Adds `value` to the table entry at `word`, validating shift, weight
    /// and degree homogeneity; prunes entries that cancel.
    pub fn add_entry(&mut self, word: SymWord, value: Elem) -> Result<(), EngineError> {
        if !GradedBasis::same(&self.basis, value.basis()) {
            return Err(EngineError::BasisMismatch);
        }
        if value.shift() != OUTPUT_SHIFT {
            return Err(EngineError::ShiftMismatch {
                expected: OUTPUT_SHIFT.0,
                got: value.shift().0,
            });
        }
        if value.is_zero() {
            return Ok(());
        }
        let expected = word.degree(&self.basis, INPUT_SHIFT) + self.degree + 2;
        if !value.is_homogeneous_of(expected) {
            return Err(EngineError::InhomogeneousEntry {
                input: word.display(&self.basis),
                expected,
                found: value.homogeneous_degree().unwrap_or(i64::MIN),
            });
        }
        let arity = word.weight();
        let table = self.comps.entry(arity).or_default();
        match table.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&value)?;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        if self.comps.get(&arity).is_some_and(|t| t.is_empty()) {
            self.comps.remove(&arity);
        }
        Ok(())
    }

    /// Evaluates the map on a factor sequence, normalizing order and sign.
    /// Sequences whose arity has no stored component map to zero.
    pub fn eval_factors(&self, factors: &[u32]) -> Elem {
        let zero = || Elem::zero(self.basis.clone(), OUTPUT_SHIFT);
        let Some(table) = self.comps.get(&factors.len()) else {
            return zero();
        };
        match normalize_word(&self.basis, INPUT_SHIFT, factors) {
            None => zero(),
            Some((word, sign)) => table
                .get(&word)
                .map(|e| e.scale(&coeff_int(sign as i64)))
                .unwrap_or_else(zero),
        }
    }

    /// Linear extension of the component tables to elements of the
    /// suspended symmetric algebra.
    pub fn apply(&self, x: &Elem) -> Result<Elem, EngineError> {
        if x.shift() != INPUT_SHIFT {
            return Err(EngineError::ShiftMismatch {
                expected: INPUT_SHIFT.0,
                got: x.shift().0,
            });
        }
        if !GradedBasis::same(&self.basis, x.basis()) {
            return Err(EngineError::BasisMismatch);
        }
        let mut acc = Elem::zero(self.basis.clone(), OUTPUT_SHIFT);
        for (w, c) in x.terms() {
            if let Some(val) = self.comps.get(&w.weight()).and_then(|t| t.get(w)) {
                acc.add_assign(&val.scale(c))?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Coeff) -> PolyMap {
        if c.is_zero() {
            return PolyMap::new(self.basis.clone(), self.degree);
        }
        PolyMap {
            basis: self.basis.clone(),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|(&m, t)| {
                    (
                        m,
                        t.iter().map(|(w, e)| (w.clone(), e.scale(c))).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &PolyMap) -> Result<PolyMap, EngineError> {
        if !GradedBasis::same(&self.basis, &other.basis) {
            return Err(EngineError::BasisMismatch);
        }
        if self.degree != other.degree {
            return Err(EngineError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for table in other.comps.values() {
            for (w, e) in table {
                out.add_entry(w.clone(), e.clone())?;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap, EngineError> {
        self.add(&other.scale(&coeff_int(-1)))
    }

    /// The circle product `self o g`.
    ///
    /// Components of `g` with arity zero are inert here: they would encode a
    /// curved piece, which every consumer of this engine rejects upstream.
    pub fn circle(&self, g: &PolyMap) -> Result<PolyMap, EngineError> {
        if !GradedBasis::same(&self.basis, &g.basis) {
            return Err(EngineError::BasisMismatch);
        }
        let mut out = PolyMap::new(self.basis.clone(), self.degree + g.degree);
        let mut arities: BTreeSet<usize> = BTreeSet::new();
        for &fa in self.comps.keys() {
            if fa == 0 {
                continue;
            }
            for &ga in g.comps.keys() {
                if ga == 0 {
                    continue;
                }
                arities.insert(fa - 1 + ga);
            }
        }
        for n in arities {
            for word in enumerate_words(&self.basis, INPUT_SHIFT, n) {
                let v = self.circle_eval(g, &word)?;
                if !v.is_zero() {
                    out.add_entry(word, v)?;
                }
            }
        }
        Ok(out)
    }

    fn circle_eval(&self, g: &PolyMap, word: &SymWord) -> Result<Elem, EngineError> {
        let xs = word.factors();
        let n = xs.len();
        let degs: Vec<i64> = xs
            .iter()
            .map(|&i| INPUT_SHIFT.degree_of(self.basis.degree(i)))
            .collect();
        let mut acc = Elem::zero(self.basis.clone(), OUTPUT_SHIFT);
        for &fa in self.comps.keys() {
            if fa == 0 || fa - 1 > n {
                continue;
            }
            let k = fa - 1;
            let l = n - k;
            if l == 0 {
                continue;
            }
            let Some(gtable) = g.comps.get(&l) else {
                continue;
            };
            for order in shuffles(k, l) {
                let shuffle_sign = koszul_sign(&order, &degs).expect("shuffle is a permutation");
                let head_deg: i64 = order[..k].iter().map(|&i| degs[i]).sum();
                let mut sign = shuffle_sign;
                if is_odd(g.degree) && is_odd(head_deg) {
                    sign = -sign;
                }
                let tail: Vec<u32> = order[k..].iter().map(|&i| xs[i]).collect();
                let Some((gword, gsign)) = normalize_word(&self.basis, INPUT_SHIFT, &tail) else {
                    continue;
                };
                let Some(gval) = gtable.get(&gword) else {
                    continue;
                };
                let outer = sign * gsign;
                for (u, cu) in gval.terms() {
                    let ufac = u.factors();
                    let mut prefix_odd = false;
                    for pos in 0..ufac.len() {
                        let d = OUTPUT_SHIFT.degree_of(self.basis.degree(ufac[pos]));
                        let split_sign = if prefix_odd && is_odd(d) { -1 } else { 1 };
                        let mut f_in: Vec<u32> = order[..k].iter().map(|&i| xs[i]).collect();
                        f_in.push(ufac[pos]);
                        let fval = self.eval_factors(&f_in);
                        if !fval.is_zero() {
                            let rest = u.without_position(pos);
                            let term = fval.mul_word(&rest);
                            let c = cu * &coeff_int((outer * split_sign) as i64);
                            acc.add_assign(&term.scale(&c))?;
                        }
                        prefix_odd ^= is_odd(d);
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Deterministic rendering of all table entries, split by output weight.
    pub fn render_entries(&self, label: &str) -> Vec<String> {
        let mut lines = Vec::new();
        for (&m, table) in &self.comps {
            for (w, val) in table {
                for n in val.weights() {
                    lines.push(format!(
                        "{}[{},{}] {} -> {}",
                        label,
                        m,
                        n,
                        w.display(&self.basis),
                        val.weight_part(n)
                    ));
                }
            }
        }
        lines
    }
}

/// Graded commutator of the circle product: `[f,g] = f o g - (-1)^{|f||g|} g o f`.
pub fn big_bracket(f: &PolyMap, g: &PolyMap) -> Result<PolyMap, EngineError> {
    let fg = f.circle(g)?;
    let gf = g.circle(f)?;
    let sign = if is_odd(f.degree) && is_odd(g.degree) {
        1
    } else {
        -1
    };
    fg.add(&gf.scale(&coeff_int(sign)))
}

/// The differential induced by a homotopy structure element: `[l, gamma]`.
///
/// Squares to zero whenever `[l, l] = 0` holds, which callers certify
/// separately.
pub fn differential(l: &PolyMap, gamma: &PolyMap) -> Result<PolyMap, EngineError> {
    big_bracket(l, gamma)
}

/// Verifies that `mu` is a Maurer-Cartan element of the positive subalgebra:
/// degree 1, components with arity and output weight at least 1, and
/// `[mu, mu] = 0` on every input word up to the arity cap.
///
/// The report never aborts early; it enumerates all failures within caps.
pub fn is_mc(mu: &PolyMap, policy: &TruncationPolicy) -> Result<VerificationReport, EngineError> {
    if mu.degree != 1 {
        return Err(EngineError::NotDegreeOne(mu.degree));
    }
    let basis = mu.basis.clone();
    let mut report = VerificationReport::new("maurer-cartan", *policy);
    report.note(format!(
        "bracket inputs enumerated up to arity {}",
        policy.max_arity
    ));
    report.push_pass("declared degree = 1");
    for (&m, table) in &mu.comps {
        for (w, val) in table {
            if m == 0 {
                report.push_fail(
                    format!("b-plus component=(0,*) word={}", w.display(&basis)),
                    val.to_string(),
                );
            }
            let scalar_part = val.weight_part(0);
            if !scalar_part.is_zero() {
                report.push_fail(
                    format!("b-plus component=({},0) word={}", m, w.display(&basis)),
                    scalar_part.to_string(),
                );
            }
        }
    }
    let bracket = big_bracket(mu, mu)?;
    for m in 1..=policy.max_arity {
        for word in enumerate_words(&basis, INPUT_SHIFT, m) {
            match bracket.comps.get(&m).and_then(|t| t.get(&word)) {
                None => {
                    report.push_pass(format!("component=({},*) word={}", m, word.display(&basis)));
                }
                Some(v) => {
                    for n in v.weights() {
                        report.push_fail(
                            format!("component=({},{}) word={}", m, n, word.display(&basis)),
                            v.weight_part(n).to_string(),
                        );
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elem::coeff_ratio;
    use num_traits::One;

    fn elem(basis: &BasisRef, ids: &[&str], c: Coeff) -> Elem {
        Elem::from_ids(basis.clone(), OUTPUT_SHIFT, ids, c).unwrap()
    }

    fn in_word(basis: &BasisRef, ids: &[&str]) -> SymWord {
        let factors: Vec<u32> = ids.iter().map(|id| basis.index_of(id).unwrap()).collect();
        normalize_word(basis, INPUT_SHIFT, &factors).unwrap().0
    }

    /// The two-dimensional nonabelian Lie algebra [x,y] = y as an arity-2
    /// table.
    fn two_dim() -> (BasisRef, PolyMap) {
        let b = crate::graded::GradedBasis::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let mut l = PolyMap::new(b.clone(), 1);
        l.add_entry(in_word(&b, &["x", "y"]), elem(&b, &["y"], Coeff::one()))
            .unwrap();
        (b, l)
    }

    #[test]
    fn apply_zero_map_and_zero_element() {
        let (b, l) = two_dim();
        let zero_map = PolyMap::new(b.clone(), 1);
        let x = Elem::from_ids(b.clone(), INPUT_SHIFT, &["x"], Coeff::one()).unwrap();
        assert!(zero_map.apply(&x).unwrap().is_zero());
        let zero = Elem::zero(b.clone(), INPUT_SHIFT);
        assert!(l.apply(&zero).unwrap().is_zero());
    }

    #[test]
    fn apply_is_linear() {
        let b = crate::graded::GradedBasis::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let mut f = PolyMap::new(b.clone(), 0);
        f.add_entry(in_word(&b, &["x"]), elem(&b, &["y"], Coeff::one()))
            .unwrap();
        let x3 = Elem::from_ids(b.clone(), INPUT_SHIFT, &["x"], coeff_int(3)).unwrap();
        assert_eq!(f.apply(&x3).unwrap(), elem(&b, &["y"], coeff_int(3)));
    }

    #[test]
    fn apply_rejects_wrong_shift() {
        let (b, l) = two_dim();
        let bad = Elem::from_ids(b.clone(), OUTPUT_SHIFT, &["x"], Coeff::one()).unwrap();
        assert!(l.apply(&bad).is_err());
    }

    #[test]
    fn entry_degree_validation() {
        let b = crate::graded::GradedBasis::from_pairs(&[("x", 0), ("y", 1)]).unwrap();
        let mut f = PolyMap::new(b.clone(), 1);
        // input word x has degree -1; expected output degree -1 + 1 + 2 = 2,
        // which is y's degree under the [-1]-shift
        assert!(f
            .add_entry(in_word(&b, &["x"]), elem(&b, &["y"], Coeff::one()))
            .is_ok());
        // x itself has output degree 1: rejected
        assert!(f
            .add_entry(in_word(&b, &["x"]), elem(&b, &["x"], Coeff::one()))
            .is_err());
    }

    #[test]
    fn circle_of_zero_maps_vanishes() {
        let (b, l) = two_dim();
        let zero = PolyMap::new(b.clone(), 1);
        assert!(l.circle(&zero).unwrap().is_zero());
        assert!(zero.circle(&l).unwrap().is_zero());
    }

    #[test]
    fn circle_arity_bookkeeping() {
        // f with a single arity-2 component, g with a single arity-1
        // component: the product lives at arity 2 (k=1, l=1).
        let (b, l) = two_dim();
        let mut g = PolyMap::new(b.clone(), 0);
        g.add_entry(in_word(&b, &["y"]), elem(&b, &["y"], Coeff::one()))
            .unwrap();
        let fg = l.circle(&g).unwrap();
        assert_eq!(fg.arities().collect::<Vec<_>>(), vec![2]);
        assert_eq!(fg.support(), vec![(2, 1)]);
    }

    #[test]
    fn circle_matches_hand_expansion_of_the_coalgebra_split() {
        // g: x -> y.z, f: y -> w, z -> u, all generators of degree 0.
        //
        // Only the (k,l) = (0,1) split contributes: the shuffle is the
        // identity with sign +1, g eats x, and the split of y.z feeds one
        // factor to f:
        //   position y (prefix empty):  + f(y).z = w.z          = -1 z.w
        //   position z (prefix y, odd): - f(z).y = -(u.y)       = +1 y.u
        let b = crate::graded::GradedBasis::from_pairs(&[
            ("x", 0),
            ("y", 0),
            ("z", 0),
            ("w", 0),
            ("u", 0),
        ])
        .unwrap();
        let mut g = PolyMap::new(b.clone(), 1);
        g.add_entry(
            in_word(&b, &["x"]),
            elem(&b, &["y", "z"], Coeff::one()),
        )
        .unwrap();
        let mut f = PolyMap::new(b.clone(), 0);
        f.add_entry(in_word(&b, &["y"]), elem(&b, &["w"], Coeff::one()))
            .unwrap();
        f.add_entry(in_word(&b, &["z"]), elem(&b, &["u"], Coeff::one()))
            .unwrap();
        let fg = f.circle(&g).unwrap();
        let got = fg.eval_factors(&[b.index_of("x").unwrap()]);
        let mut expected = elem(&b, &["z", "w"], coeff_int(-1));
        expected
            .add_assign(&elem(&b, &["y", "u"], Coeff::one()))
            .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn bracket_of_even_map_with_itself_vanishes() {
        let b = crate::graded::GradedBasis::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let mut f = PolyMap::new(b.clone(), 0);
        f.add_entry(in_word(&b, &["x"]), elem(&b, &["y"], coeff_ratio(2, 3)))
            .unwrap();
        f.add_entry(in_word(&b, &["y"]), elem(&b, &["x"], coeff_int(5)))
            .unwrap();
        let ff = big_bracket(&f, &f).unwrap();
        assert!(ff.is_zero());
    }

    #[test]
    fn two_dim_lie_algebra_is_maurer_cartan() {
        let (_, l) = two_dim();
        let report = is_mc(&l, &TruncationPolicy::default()).unwrap();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn inconsistent_table_fails_with_witness() {
        // l2(x.x) = y, l2(x.y) = z on degrees 1, 2, 3: graded antisymmetric
        // by construction but the triple identity fails at x.x.x.
        let b =
            crate::graded::GradedBasis::from_pairs(&[("x", 1), ("y", 2), ("z", 3)]).unwrap();
        let mut l = PolyMap::new(b.clone(), 1);
        l.add_entry(in_word(&b, &["x", "x"]), elem(&b, &["y"], Coeff::one()))
            .unwrap();
        l.add_entry(in_word(&b, &["x", "y"]), elem(&b, &["z"], Coeff::one()))
            .unwrap();
        let report = is_mc(&l, &TruncationPolicy::default()).unwrap();
        assert!(!report.passed());
        let witnesses: Vec<&str> = report.failures().map(|i| i.subject.as_str()).collect();
        assert!(
            witnesses.iter().any(|s| s.contains("word=x.x.x")),
            "{:?}",
            witnesses
        );
    }

    #[test]
    fn zero_map_is_maurer_cartan() {
        let b = crate::graded::GradedBasis::from_pairs(&[("x", 0)]).unwrap();
        let zero = PolyMap::new(b, 1);
        assert!(is_mc(&zero, &TruncationPolicy::default()).unwrap().passed());
    }

    #[test]
    fn weight_zero_output_component_is_flagged() {
        // a map into the scalars: with x of native degree -2 the entry
        // x -> 7 * (empty word) is degree-consistent, but its output weight
        // is zero, which the positive-subalgebra membership check rejects
        let b = crate::graded::GradedBasis::from_pairs(&[("x", -2)]).unwrap();
        let mut mu = PolyMap::new(b.clone(), 1);
        let scalar = Elem::unit(b.clone(), OUTPUT_SHIFT).scale(&coeff_int(7));
        mu.add_entry(in_word(&b, &["x"]), scalar).unwrap();
        let report = is_mc(&mu, &TruncationPolicy::default()).unwrap();
        assert!(!report.passed());
        assert!(report
            .failures()
            .any(|i| i.subject.contains("b-plus component=(1,0)")));
    }

    #[test]
    fn rejects_wrong_declared_degree() {
        let b = crate::graded::GradedBasis::from_pairs(&[("x", 0)]).unwrap();
        let mu = PolyMap::new(b, 0);
        assert!(is_mc(&mu, &TruncationPolicy::default()).is_err());
    }

    #[test]
    fn differential_of_zero_is_zero() {
        let (b, l) = two_dim();
        let zero = PolyMap::new(b, 0);
        assert!(differential(&l, &zero).unwrap().is_zero());
    }
}
