//! Graded bases, degree shifts, Koszul signs, shuffles, and canonical
//! symmetric words.
//!
//! Every sign in the engine reduces to the bookkeeping in this module:
//! degrees live on basis vectors, shifts reinterpret them, and permuting
//! homogeneous factors costs one sign per inverted pair of odd factors.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::EngineError;

/// A named basis vector with its native integer degree (before any shift).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVec {
    pub id: String,
    pub degree: i64,
}

/// Finite ordered homogeneous basis of a graded vector space.
///
/// The construction order is fixed for the lifetime of the basis; together
/// with the degrees it induces the canonical factor order used by
/// [`normalize_word`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    vectors: Vec<BasisVec>,
    /// index -> canonical rank, sorting by (degree, construction position)
    rank: Vec<usize>,
    /// canonical rank -> index
    by_rank: Vec<u32>,
}

/// Shared handle to a basis; elements and operator tables hold one of these.
pub type BasisRef = Arc<GradedBasis>;

impl GradedBasis {
    pub fn new(vectors: Vec<BasisVec>) -> Result<Self, EngineError> {
        for (i, v) in vectors.iter().enumerate() {
            if vectors[..i].iter().any(|w| w.id == v.id) {
                return Err(EngineError::DuplicateId(v.id.clone()));
            }
        }
        let mut by_rank: Vec<u32> = (0..vectors.len() as u32).collect();
        by_rank.sort_by_key(|&i| (vectors[i as usize].degree, i));
        let mut rank = vec![0usize; vectors.len()];
        for (r, &i) in by_rank.iter().enumerate() {
            rank[i as usize] = r;
        }
        Ok(GradedBasis {
            vectors,
            rank,
            by_rank,
        })
    }

    /// Convenience constructor from `(id, degree)` pairs.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Result<BasisRef, EngineError> {
        let vectors = pairs
            .iter()
            .map(|(id, d)| BasisVec {
                id: (*id).to_string(),
                degree: *d,
            })
            .collect();
        Ok(Arc::new(GradedBasis::new(vectors)?))
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BasisVec] {
        &self.vectors
    }

    pub fn degree(&self, index: u32) -> i64 {
        self.vectors[index as usize].degree
    }

    pub fn id(&self, index: u32) -> &str {
        &self.vectors[index as usize].id
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.vectors.iter().position(|v| v.id == id).map(|i| i as u32)
    }

    pub fn rank(&self, index: u32) -> usize {
        self.rank[index as usize]
    }

    /// Basis indices in canonical factor order.
    pub fn indices_by_rank(&self) -> &[u32] {
        &self.by_rank
    }

    /// True when all basis vectors sit in native degree zero.
    pub fn is_concentrated_in_degree_zero(&self) -> bool {
        self.vectors.iter().all(|v| v.degree == 0)
    }

    pub(crate) fn same(a: &BasisRef, b: &BasisRef) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Degree shift: a vector of native degree `d` is read as degree `d - offset`
/// in the shifted space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shift(pub i64);

impl Shift {
    pub fn degree_of(&self, native: i64) -> i64 {
        native - self.0
    }
}

impl std::fmt::Display for Shift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

pub(crate) fn is_odd(degree: i64) -> bool {
    degree.rem_euclid(2) == 1
}

/// Koszul sign of rearranging homogeneous objects into the order given by
/// `order`: position `a` of the result holds the object originally at
/// `order[a]`, and `degrees` are listed in the original order. Each inverted
/// pair of odd-degree objects contributes a factor of -1.
pub fn koszul_sign(order: &[usize], degrees: &[i64]) -> Result<i32, EngineError> {
    if order.len() != degrees.len() {
        return Err(EngineError::LengthMismatch {
            perm: order.len(),
            degrees: degrees.len(),
        });
    }
    let n = order.len();
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(EngineError::NotAPermutation(n));
        }
        seen[i] = true;
    }
    let mut sign = 1i32;
    for a in 0..n {
        for b in (a + 1)..n {
            if order[a] > order[b] && is_odd(degrees[order[a]]) && is_odd(degrees[order[b]]) {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// All (k,l)-shuffles of `0..k+l` in lexicographic order of the first block.
///
/// Each entry is the rearranged index sequence: the first `k` slots and the
/// last `l` slots are both strictly increasing.
pub fn shuffles(k: usize, l: usize) -> Vec<Vec<usize>> {
    let n = k + l;
    if k == 0 || l == 0 {
        return vec![(0..n).collect()];
    }
    let mut out = Vec::new();
    let mut first: Vec<usize> = (0..k).collect();
    loop {
        let mut order = first.clone();
        let mut in_first = vec![false; n];
        for &i in &first {
            in_first[i] = true;
        }
        order.extend((0..n).filter(|&i| !in_first[i]));
        out.push(order);

        // next k-combination of 0..n
        let mut i = k;
        while i > 0 && first[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        first[i - 1] += 1;
        for j in i..k {
            first[j] = first[j - 1] + 1;
        }
    }
    out
}

/// Canonically ordered graded-symmetric monomial, stored as basis indices in
/// canonical factor order. The ambient shift lives on the container (an
/// [`crate::elem::Elem`] or an operator table), not on the word itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymWord {
    factors: Vec<u32>,
}

impl SymWord {
    pub fn empty() -> Self {
        SymWord { factors: Vec::new() }
    }

    /// Wraps an already-canonical factor list. Callers normally go through
    /// [`normalize_word`] instead.
    pub(crate) fn from_canonical(factors: Vec<u32>) -> Self {
        SymWord { factors }
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn degree(&self, basis: &GradedBasis, shift: Shift) -> i64 {
        self.factors
            .iter()
            .map(|&i| shift.degree_of(basis.degree(i)))
            .sum()
    }

    /// The word with the factor at `position` removed; stays canonical.
    pub fn without_position(&self, position: usize) -> SymWord {
        let mut factors = self.factors.clone();
        factors.remove(position);
        SymWord { factors }
    }

    pub fn display(&self, basis: &GradedBasis) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (i, &f) in self.factors.iter().enumerate() {
            if i > 0 {
                s.push('.');
            }
            let _ = write!(s, "{}", basis.id(f));
        }
        s
    }
}

/// Sorts `factors` into canonical order, accumulating the Koszul sign of the
/// sorting permutation on shifted degrees. Returns `None` when a factor of
/// odd shifted degree repeats (its square vanishes).
pub fn normalize_word(
    basis: &GradedBasis,
    shift: Shift,
    factors: &[u32],
) -> Option<(SymWord, i32)> {
    let mut sign = 1i32;
    let n = factors.len();
    for a in 0..n {
        let da = shift.degree_of(basis.degree(factors[a]));
        for b in (a + 1)..n {
            if factors[a] == factors[b] {
                if is_odd(da) {
                    return None;
                }
                continue;
            }
            if basis.rank(factors[a]) > basis.rank(factors[b])
                && is_odd(da)
                && is_odd(shift.degree_of(basis.degree(factors[b])))
            {
                sign = -sign;
            }
        }
    }
    let mut sorted = factors.to_vec();
    sorted.sort_by_key(|&i| basis.rank(i));
    Some((SymWord { factors: sorted }, sign))
}

/// All canonical words of the given weight over `basis`, in deterministic
/// order. Factors of odd shifted degree appear at most once per word.
pub fn enumerate_words(basis: &GradedBasis, shift: Shift, weight: usize) -> Vec<SymWord> {
    fn rec(
        basis: &GradedBasis,
        shift: Shift,
        weight: usize,
        from_rank: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<SymWord>,
    ) {
        if current.len() == weight {
            out.push(SymWord {
                factors: current.clone(),
            });
            return;
        }
        for r in from_rank..basis.dim() {
            let idx = basis.indices_by_rank()[r];
            let odd = is_odd(shift.degree_of(basis.degree(idx)));
            current.push(idx);
            // odd factors may not repeat, so the next pick starts one rank later
            let next = if odd { r + 1 } else { r };
            rec(basis, shift, weight, next, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::with_capacity(weight);
    rec(basis, shift, weight, 0, &mut current, &mut out);
    out
}

/// All canonical words of weight between 1 and `max_weight` inclusive.
pub fn enumerate_words_up_to(
    basis: &GradedBasis,
    shift: Shift,
    max_weight: usize,
) -> Vec<SymWord> {
    (1..=max_weight)
        .flat_map(|w| enumerate_words(basis, shift, w))
        .collect()
}
