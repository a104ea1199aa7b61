//! Symbolic verification over `ℚ[𝔲_P]`.
//!
//! The generic element `X` of `𝔲_P` has one variable `x_{ab}` per free
//! position. For a numeric invertible `g`, the entries of `gXg⁻¹` are linear
//! forms in these variables, and the leading-minor product
//! `Π_i det((I + gXg⁻¹)_{≤i,≤i})` becomes a polynomial whose total degree
//! and top homogeneous component can be compared with `dim 𝔲_P` and with
//! `Π_i s_{d_{λ,i}}((gXg⁻¹)_{≤i,≤i})`.

mod poly;

pub use poly::{Monomial, MultiPoly};

use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{dimensions, richardson_partition, Composition, DVector, ParabolicShape};
use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::matrix::Matrix;
use crate::splitting::klt_factor;

/// Largest `n` accepted by [`verify_top_component`].
pub const TOP_COMPONENT_MAX_N: usize = 5;
/// Largest `n` accepted by [`monomial_degree_check`].
pub const MONOMIAL_CHECK_MAX_N: usize = 6;

/// Square matrix of polynomials in the coordinates of `𝔲_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    n: usize,
    vars: Vec<(usize, usize)>,
    entries: Vec<MultiPoly>,
}

impl SymbolicMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Variable positions (0-based), in variable order.
    pub fn variables(&self) -> &[(usize, usize)] {
        &self.vars
    }

    /// Names `x_a_b` with 1-based positions.
    pub fn variable_names(&self) -> Vec<String> {
        self.vars.iter().map(|(a, b)| format!("x_{}_{}", a + 1, b + 1)).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.n + c]
    }

    /// Largest total degree among the entries (0 when all vanish).
    pub fn max_entry_degree(&self) -> usize {
        self.entries.iter().filter_map(MultiPoly::total_degree).max().unwrap_or(0)
    }

    /// `g·M·g⁻¹`.
    pub fn conjugate(&self, g: &Matrix<Rationals>) -> Result<SymbolicMatrix> {
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} conjugator for a {}x{} matrix",
                g.rows(),
                g.cols(),
                self.n,
                self.n
            )));
        }
        let g_inv = g.inverse()?;
        let n = self.n;
        let k = self.nvars();
        // (M g⁻¹) first, then g (M g⁻¹)
        let mut right = vec![MultiPoly::zero(k); n * n];
        for a in 0..n {
            for c in 0..n {
                right[a * n + c] = (0..n)
                    .filter(|&b| !g_inv.get(b, c).is_zero())
                    .fold(MultiPoly::zero(k), |acc, b| acc.add(&self.get(a, b).scale(g_inv.get(b, c))));
            }
        }
        let mut entries = vec![MultiPoly::zero(k); n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n)
                    .filter(|&a| !g.get(r, a).is_zero())
                    .fold(MultiPoly::zero(k), |acc, a| acc.add(&right[a * n + c].scale(g.get(r, a))));
            }
        }
        Ok(SymbolicMatrix { n, vars: self.vars.clone(), entries })
    }

    /// `I + M`.
    pub fn shifted_identity(&self) -> SymbolicMatrix {
        let mut out = self.clone();
        let k = self.nvars();
        for d in 0..self.n {
            out.entries[d * self.n + d] = out.entries[d * self.n + d].add(&MultiPoly::one(k));
        }
        out
    }

    /// Determinant of the submatrix on `rows × cols`, by Laplace expansion
    /// along the row with the fewest nonzero entries.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        assert_eq!(rows.len(), cols.len());
        let k = self.nvars();
        match rows.len() {
            0 => return MultiPoly::one(k),
            1 => return self.get(rows[0], cols[0]).clone(),
            _ => {}
        }
        let (pivot, _) = rows
            .iter()
            .enumerate()
            .map(|(idx, &r)| (idx, cols.iter().filter(|&&c| !self.get(r, c).is_zero()).count()))
            .min_by_key(|&(_, nonzero)| nonzero)
            .expect("nonempty");
        let r = rows[pivot];
        let rest_rows: Vec<usize> = rows.iter().enumerate().filter(|&(i, _)| i != pivot).map(|(_, &x)| x).collect();
        let mut det = MultiPoly::zero(k);
        for (j, &c) in cols.iter().enumerate() {
            let entry = self.get(r, c);
            if entry.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = cols.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
            let term = entry.mul(&self.minor(&rest_rows, &rest_cols));
            det = if (pivot + j) % 2 == 0 { det.add(&term) } else { det.sub(&term) };
        }
        det
    }

    pub fn leading_minor(&self, i: usize) -> MultiPoly {
        let idx: Vec<usize> = (0..i).collect();
        self.minor(&idx, &idx)
    }

    /// `s_d` of the leading `i × i` block: the sum of its principal `d × d` minors.
    pub fn leading_principal_minor_sum(&self, i: usize, d: usize) -> MultiPoly {
        let mut total = MultiPoly::zero(self.nvars());
        for subset in subsets(i, d) {
            total = total.add(&self.minor(&subset, &subset));
        }
        total
    }

    /// Specializes every variable; `point[k]` is the value of variable `k`.
    pub fn evaluate(&self, point: &[BigRational]) -> Matrix<Rationals> {
        Matrix::from_fn(&Rationals, self.n, self.n, |r, c| self.get(r, c).eval(point))
    }
}

/// All `d`-element subsets of `0..i` in lexicographic order.
fn subsets(i: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, i: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in start..i {
            cur.push(v);
            rec(v + 1, i, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d <= i {
        rec(0, i, d, &mut Vec::new(), &mut out);
    }
    out
}

/// The generic element of `𝔲_P`: variable `x_{ab}` at each free position.
pub fn generic_nilradical_matrix(shape: &ParabolicShape) -> SymbolicMatrix {
    let n = shape.n();
    let vars = shape.free_positions().to_vec();
    let k = vars.len();
    let mut entries = vec![MultiPoly::zero(k); n * n];
    for (v, &(a, b)) in vars.iter().enumerate() {
        entries[a * n + b] = MultiPoly::var(k, v);
    }
    SymbolicMatrix { n, vars, entries }
}

/// The numeric element of `𝔲_P` with the given values at the free positions.
pub fn nilradical_point(shape: &ParabolicShape, values: &[BigRational]) -> Matrix<Rationals> {
    assert_eq!(values.len(), shape.dim());
    let mut m = Matrix::zeros(&Rationals, shape.n(), shape.n());
    for (&(a, b), v) in shape.free_positions().iter().zip(values) {
        m.set(a, b, v.clone());
    }
    m
}

pub fn conjugate_symbolic(m: &SymbolicMatrix, g: &Matrix<Rationals>) -> Result<SymbolicMatrix> {
    m.conjugate(g)
}

/// The factors `det((I + M)_{≤i,≤i})`, `i = 1..n-1`.
pub fn symbolic_klt_factors(m: &SymbolicMatrix) -> Vec<MultiPoly> {
    let shifted = m.shifted_identity();
    (1..m.n()).map(|i| shifted.leading_minor(i)).collect()
}

/// `Π_{i=1}^{n-1} det((I + M)_{≤i,≤i})`.
pub fn symbolic_klt(m: &SymbolicMatrix) -> MultiPoly {
    MultiPoly::product(m.nvars(), &symbolic_klt_factors(m))
}

/// `Π_i s_{d_i}(M_{≤i,≤i})`.
pub fn symbolic_f_lambda(m: &SymbolicMatrix, d: &DVector) -> MultiPoly {
    let factors: Vec<MultiPoly> = (1..m.n())
        .map(|i| m.leading_principal_minor_sum(i, d.get(i)))
        .collect();
    MultiPoly::product(m.nvars(), &factors)
}

/// Outcome of comparing the symbolic leading-minor product with `dim 𝔲_P`
/// and with the symbolic `f_λ` for one conjugator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopComponentRecord {
    pub nu: Composition,
    pub degree: usize,
    pub expected_degree: usize,
    pub factor_degrees: Vec<usize>,
    pub d_vector: Vec<usize>,
    /// Every factor degree is at most the matching `d_{λ,i}`.
    pub factor_bound_ok: bool,
    /// `degree == expected_degree`.
    pub attained: bool,
    /// When attained, the top component equals the symbolic `f_λ`; otherwise
    /// the symbolic `f_λ` is zero, as it must be when some factor falls short.
    pub top_component_matches: bool,
    /// Degree 0 where `dim 𝔲_P > 0`, e.g. `g = I`. Not a counterexample.
    pub degenerate: bool,
}

impl TopComponentRecord {
    /// No bound was broken and the top-component identity holds.
    pub fn consistent(&self) -> bool {
        self.degree <= self.expected_degree && self.factor_bound_ok && self.top_component_matches
    }
}

/// Full result of [`verify_top_component`], keeping the polynomials for
/// specialization checks.
#[derive(Clone, Debug)]
pub struct TopComponentCheck {
    pub record: TopComponentRecord,
    pub conjugated: SymbolicMatrix,
    pub klt: MultiPoly,
    pub f_lambda: MultiPoly,
}

pub fn verify_top_component(nu: &Composition, g: &Matrix<Rationals>) -> Result<TopComponentCheck> {
    let n = nu.n();
    if n > TOP_COMPONENT_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "symbolic expansion limited to n <= {TOP_COMPONENT_MAX_N}, got {n}"
        )));
    }
    let shape = ParabolicShape::new(nu);
    let lambda = richardson_partition(nu);
    let d = DVector::from_partition(&lambda);
    let (expected_degree, _) = dimensions(nu);

    let conjugated = generic_nilradical_matrix(&shape).conjugate(g)?;
    let factors = symbolic_klt_factors(&conjugated);
    let factor_degrees: Vec<usize> = factors
        .iter()
        .map(|f| f.total_degree().expect("constant term 1"))
        .collect();
    let klt = MultiPoly::product(conjugated.nvars(), &factors);
    let degree = klt.total_degree().expect("constant term 1");
    let f_sym = symbolic_f_lambda(&conjugated, &d);

    let attained = degree == expected_degree;
    let top_component_matches = if attained {
        klt.homogeneous_component(degree) == f_sym
    } else {
        f_sym.is_zero()
    };
    let record = TopComponentRecord {
        nu: nu.clone(),
        degree,
        expected_degree,
        factor_bound_ok: factor_degrees.iter().zip(d.values()).all(|(a, b)| a <= b),
        factor_degrees,
        d_vector: d.values().to_vec(),
        attained,
        top_component_matches,
        degenerate: degree == 0 && expected_degree > 0,
    };
    Ok(TopComponentCheck { record, conjugated, klt, f_lambda: f_sym })
}

impl TopComponentCheck {
    /// Evaluates the symbolic product at `values` and recomputes it numerically
    /// from `g·X·g⁻¹`; returns both.
    pub fn specialize(&self, g: &Matrix<Rationals>, values: &[BigRational]) -> Result<(BigRational, BigRational)> {
        let shape = ParabolicShape::new(&self.record.nu);
        let x = nilradical_point(&shape, values);
        let numeric = klt_factor(&g.mul(&x)?.mul(&g.inverse()?)?)?;
        Ok((self.klt.eval(values), numeric))
    }
}

/// Largest x-degree of a product `y_{i_1 j_1} ⋯ y_{i_s j_s}` with distinct rows
/// and distinct columns, `y = I + X`, `X` generic in `𝔲_P`. Products that are
/// identically zero are skipped; `None` if all of them are.
pub fn max_monomial_degree(nu: &Composition, s: usize) -> Result<Option<usize>> {
    let n = nu.n();
    if n > MONOMIAL_CHECK_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "monomial enumeration limited to n <= {MONOMIAL_CHECK_MAX_N}, got {n}"
        )));
    }
    if s == 0 || s >= n {
        return Err(Error::IndexOutOfRange { index: s, lo: 1, hi: n.saturating_sub(1) });
    }
    let shape = ParabolicShape::new(nu);
    let mut best = None;
    for rows in subsets(n, s) {
        let mut used = vec![false; n];
        search_assignments(&shape, &rows, 0, &mut used, 0, &mut best);
    }
    Ok(best)
}

// y_{ab} is 1 on the diagonal, x_{ab} at free positions, 0 elsewhere
fn search_assignments(
    shape: &ParabolicShape,
    rows: &[usize],
    depth: usize,
    used: &mut [bool],
    degree: usize,
    best: &mut Option<usize>,
) {
    if depth == rows.len() {
        *best = Some(best.map_or(degree, |b| b.max(degree)));
        return;
    }
    let a = rows[depth];
    for b in 0..shape.n() {
        if used[b] {
            continue;
        }
        let step = if a == b {
            0
        } else if shape.is_free(a, b) {
            1
        } else {
            continue;
        };
        used[b] = true;
        search_assignments(shape, rows, depth + 1, used, degree + step, best);
        used[b] = false;
    }
}

/// Every such product has x-degree at most `d_{λ,s}`, for `1 ≤ s ≤ n−1`.
pub fn monomial_degree_check(nu: &Composition, s: usize) -> Result<bool> {
    let max = max_monomial_degree(nu, s)?;
    let d = DVector::from_partition(&richardson_partition(nu));
    Ok(max.is_none_or(|m| m <= d.get(s)))
}

/// Rational point with integer coordinates drawn from `[-bound, bound]`.
pub fn random_point(nvars: usize, rng: &mut crate::rng::TrialRng, bound: i64) -> Vec<BigRational> {
    (0..nvars).map(|_| Rationals.sample(rng, bound)).collect()
}
