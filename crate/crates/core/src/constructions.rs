//! Witness matrices, orbit samplers and invariant subspaces.

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::rng::TrialRng;

/// Default entry range `[-3, 3]` for conjugators sampled over the rationals.
pub const DEFAULT_SAMPLE_BOUND: i64 = 3;

/// Nilpotent Jordan matrix with blocks `λ_1, λ_2, …` down the diagonal.
/// Within a block, `e_k ↦ e_{k-1}` (ones on the superdiagonal).
pub fn jordan_matrix<F: Field>(field: &F, lambda: &Partition) -> Matrix<F> {
    let n = lambda.n();
    let mut m = Matrix::zeros(field, n, n);
    let mut offset = 0;
    for &size in lambda.parts() {
        for k in 1..size {
            m.set(offset + k - 1, offset + k, field.one());
        }
        offset += size;
    }
    m
}

/// `rank(X^k)` for `k = 0..=n`.
pub fn rank_sequence<F: Field>(x: &Matrix<F>) -> Result<Vec<usize>> {
    let n = x.require_square()?;
    let mut out = Vec::with_capacity(n + 1);
    let mut power = Matrix::identity(x.field(), n);
    for k in 0..=n {
        out.push(power.rank());
        if k < n {
            power = power.mul(x)?;
        }
    }
    Ok(out)
}

/// Expected `rank(X^k) = Σ_j max(λ_j − k, 0)` for `X` of Jordan type `λ`.
pub fn expected_rank_sequence(lambda: &Partition) -> Vec<usize> {
    (0..=lambda.n())
        .map(|k| lambda.parts().iter().map(|&p| p.saturating_sub(k)).sum())
        .collect()
}

/// Certifies that the nilpotent Jordan type of `x` is `λ` via its rank sequence.
pub fn has_jordan_type<F: Field>(x: &Matrix<F>, lambda: &Partition) -> bool {
    x.rows() == lambda.n()
        && rank_sequence(x).is_ok_and(|seq| seq == expected_rank_sequence(lambda))
}

/// Columns are the chain `e_1 + e_{h+1}, e_2, …, e_i`.
fn chain_basis<F: Field>(field: &F, i: usize, h: usize) -> Matrix<F> {
    let mut c = Matrix::identity(field, i);
    c.set(h, 0, field.one());
    c
}

fn check_witness_params(i: usize, h: usize) -> Result<()> {
    if i < 2 {
        return Err(Error::IndexOutOfRange { index: i, lo: 2, hi: usize::MAX });
    }
    if h == 0 || h >= i {
        return Err(Error::IndexOutOfRange { index: h, lo: 1, hi: i - 1 });
    }
    Ok(())
}

/// Regular nilpotent `i × i` matrix whose leading `h × h` block is invertible.
///
/// It is the operator with `X(e_j) = e_{j-1}` for `2 < j ≤ i`,
/// `X(e_2) = e_1 + e_{h+1}` and `X(e_1 + e_{h+1}) = 0`, i.e. the shift along
/// the chain `e_i → … → e_2 → e_1 + e_{h+1} → 0`. Writing `C` for the chain
/// basis, `X = C·J_i·C⁻¹`.
pub fn regular_nilpotent_witness<F: Field>(field: &F, i: usize, h: usize) -> Result<Matrix<F>> {
    check_witness_params(i, h)?;
    let chain = chain_basis(field, i, h);
    let shift = jordan_matrix(field, &Partition::row(i));
    chain.mul(&shift)?.mul(&chain.inverse()?)
}

/// Basis vectors of the `index`-th Jordan block, in ambient coordinates.
///
/// With `h = Some(h)` the basis is the one in which the block acts by
/// [`regular_nilpotent_witness`]`(size, h)`; otherwise it is the standard basis.
fn block_basis<F: Field>(
    field: &F,
    n: usize,
    offset: usize,
    size: usize,
    h: Option<usize>,
) -> Result<Vec<Vec<F::Elem>>> {
    let local = match h {
        // J·P = P·X_R with P = C⁻¹
        Some(h) => chain_basis(field, size, h).inverse()?,
        None => Matrix::identity(field, size),
    };
    Ok((0..size)
        .map(|a| {
            let mut v = vec![field.zero(); n];
            for r in 0..size {
                v[offset + r] = local.get(r, a).clone();
            }
            v
        })
        .collect())
}

/// An element of `𝒪_λ` whose leading `i × i` block has stable rank exactly `d_{λ,i}`.
///
/// Takes `s ≤ r` maximal with `Σ_{j≤s}(λ_j − 1) ≤ i` and
/// `h = i − Σ_{j≤s}(λ_j − 1)`, equips the Jordan blocks of `J_λ` with bases in
/// which their leading blocks are invertible, orders the basis so that the
/// first `i` vectors split into whole invertible or whole nilpotent pieces,
/// and returns the matrix of `J_λ` in that basis.
pub fn existence_witness<F: Field>(field: &F, lambda: &Partition, i: usize) -> Result<Matrix<F>> {
    let n = lambda.n();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n.saturating_sub(1) });
    }
    let parts = lambda.parts();
    let r = parts.len();
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, &p| {
            let o = *acc;
            *acc += p;
            Some(o)
        })
        .collect();

    let mut s = 0;
    let mut used = 0;
    while s < r && used + parts[s] - 1 <= i {
        used += parts[s] - 1;
        s += 1;
    }
    let h = i - used;

    let mut blocks = Vec::with_capacity(r);
    for (j, &size) in parts.iter().enumerate() {
        let param = if j < s && size >= 2 {
            Some(size - 1)
        } else if j == s && s < r && h > 0 {
            Some(h)
        } else {
            None
        };
        blocks.push(block_basis(field, n, offsets[j], size, param)?);
    }

    // how many leading vectors of each block go into the first i positions
    let mut take = vec![0; r];
    if i <= n - r {
        for j in 0..s {
            take[j] = parts[j] - 1;
        }
        if s < r {
            take[s] = h;
        }
    } else {
        for j in 0..r {
            take[j] = if j < n - i { parts[j] - 1 } else { parts[j] };
        }
    }
    debug_assert_eq!(take.iter().sum::<usize>(), i);

    let mut ordered = Vec::with_capacity(n);
    for (j, block) in blocks.iter().enumerate() {
        ordered.extend(block[..take[j]].iter().cloned());
    }
    for (j, block) in blocks.iter().enumerate() {
        ordered.extend(block[take[j]..].iter().cloned());
    }
    let basis = Matrix::from_columns(field, n, &ordered);
    basis.inverse()?.mul(&jordan_matrix(field, lambda))?.mul(&basis)
}

/// Random invertible `n × n` matrix, by rejection on singular draws.
pub fn random_invertible<F: Field>(field: &F, n: usize, rng: &mut TrialRng, bound: i64) -> Matrix<F> {
    loop {
        let data = (0..n * n).map(|_| field.sample(rng, bound)).collect();
        let g = Matrix::from_vec(field, n, n, data).expect("n*n entries");
        if g.rank() == n {
            return g;
        }
    }
}

/// Random square matrix with independent entries.
pub fn random_matrix<F: Field>(field: &F, n: usize, rng: &mut TrialRng, bound: i64) -> Matrix<F> {
    let data = (0..n * n).map(|_| field.sample(rng, bound)).collect();
    Matrix::from_vec(field, n, n, data).expect("n*n entries")
}

/// A conjugate `g·J_λ·g⁻¹` together with what is needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSample<F: Field> {
    pub matrix: Matrix<F>,
    pub lambda: Partition,
    pub conjugator: Matrix<F>,
    /// Hex key of the stream the conjugator was drawn from.
    pub seed: String,
}

impl<F: Field> OrbitSample<F> {
    /// Conjugates `J_λ` by a given `g`, certifying the Jordan type.
    pub fn from_conjugator(lambda: &Partition, g: Matrix<F>, seed: String) -> Result<Self> {
        let field = g.field().clone();
        let j = jordan_matrix(&field, lambda);
        let matrix = g.mul(&j)?.mul(&g.inverse()?)?;
        if !has_jordan_type(&matrix, lambda) {
            return Err(Error::DimensionMismatch(format!(
                "conjugate of J_{lambda} failed its rank certificate"
            )));
        }
        Ok(OrbitSample { matrix, lambda: lambda.clone(), conjugator: g, seed })
    }
}

/// Random element of `𝒪_λ` with a certified Jordan type.
pub fn random_orbit_element<F: Field>(
    field: &F,
    lambda: &Partition,
    rng: &mut TrialRng,
    bound: i64,
) -> Result<OrbitSample<F>> {
    let seed = rng.seed_hex();
    let g = random_invertible(field, lambda.n(), rng, bound);
    OrbitSample::from_conjugator(lambda, g, seed)
}

/// A subspace of `F^n`, stored as a list of independent column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    basis: Vec<Vec<F::Elem>>,
}

impl<F: Field> Subspace<F> {
    /// The span of `vectors`; dependent vectors are dropped.
    pub fn span(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        let mut basis: Vec<Vec<F::Elem>> = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in F^{ambient}",
                    v.len()
                )));
            }
            let mut candidate = basis.clone();
            candidate.push(v.clone());
            if Matrix::from_columns(field, ambient, &candidate).rank() == candidate.len() {
                basis = candidate;
            }
        }
        Ok(Subspace { field: field.clone(), ambient, basis })
    }

    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, basis: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Self::coordinate(field, ambient, ambient)
    }

    /// `span(e_1, …, e_i)`.
    pub fn coordinate(field: &F, ambient: usize, i: usize) -> Self {
        let basis = (0..i)
            .map(|k| {
                let mut v = vec![field.zero(); ambient];
                v[k] = field.one();
                v
            })
            .collect();
        Subspace { field: field.clone(), ambient, basis }
    }

    /// Span of `dim` random vectors, redrawn until they are independent.
    pub fn random(field: &F, ambient: usize, dim: usize, rng: &mut TrialRng, bound: i64) -> Self {
        assert!(dim <= ambient);
        loop {
            let vectors: Vec<Vec<F::Elem>> = (0..dim)
                .map(|_| (0..ambient).map(|_| field.sample(rng, bound)).collect())
                .collect();
            if Matrix::from_columns(field, ambient, &vectors).rank() == dim {
                return Subspace { field: field.clone(), ambient, basis: vectors };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    /// `ambient × dim` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(&self.field, self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut cols = self.basis.clone();
        cols.push(v.to_vec());
        Matrix::from_columns(&self.field, self.ambient, &cols).rank() == self.dim()
    }

    pub fn is_within(&self, other: &Subspace<F>) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// `X·U ⊆ U`.
    pub fn is_invariant(&self, x: &Matrix<F>) -> bool {
        self.basis.iter().all(|v| self.contains(&x.mul_vec(v)))
    }
}

/// The largest `X`-invariant subspace of `W`, with the number of shrinking steps taken.
///
/// Iterates `W ← W ∩ X⁻¹(W)`: with `B` a basis of `W` and `A` a basis of its
/// annihilator, `W ∩ X⁻¹(W) = B · ker(A·X·B)`.
pub fn max_invariant_subspace_with_steps<F: Field>(
    x: &Matrix<F>,
    w: &Subspace<F>,
) -> Result<(Subspace<F>, usize)> {
    let n = x.require_square()?;
    if w.ambient() != n {
        return Err(Error::DimensionMismatch(format!(
            "subspace of F^{} for a {n}x{n} matrix",
            w.ambient()
        )));
    }
    let field = x.field().clone();
    let mut current = w.clone();
    let mut steps = 0;
    loop {
        if current.dim() == 0 {
            return Ok((current, steps));
        }
        let b = current.basis_matrix();
        let annihilator = b.transpose().kernel();
        let a = Matrix::from_columns(&field, n, &annihilator).transpose();
        let coeffs = a.mul(x)?.mul(&b)?.kernel();
        if coeffs.len() == current.dim() {
            return Ok((current, steps));
        }
        let vectors: Vec<Vec<F::Elem>> = coeffs.iter().map(|c| b.mul_vec(c)).collect();
        current = Subspace { field: field.clone(), ambient: n, basis: vectors };
        steps += 1;
    }
}

pub fn max_invariant_subspace<F: Field>(x: &Matrix<F>, w: &Subspace<F>) -> Result<Subspace<F>> {
    max_invariant_subspace_with_steps(x, w).map(|(u, _)| u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::d_value;
    use crate::field::{PrimeField, Rationals};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn jordan_matrix_examples() {
        let q = Rationals;
        assert_eq!(jordan_matrix(&q, &part("3,2")).to_string(), "0,1,0,0,0;0,0,1,0,0;0,0,0,0,0;0,0,0,0,1;0,0,0,0,0");
        assert!(jordan_matrix(&q, &part("1,1")).is_zero());
        let j4 = jordan_matrix(&q, &Partition::row(4));
        for r in 0..4 {
            for c in 0..4 {
                let expected = if c == r + 1 { q.one() } else { q.zero() };
                assert_eq!(j4.get(r, c), &expected);
            }
        }
    }

    #[test]
    fn regular_witness_literals() {
        let q = Rationals;
        // unfolded by hand from X(e_2) = e_1 + e_{h+1}, X(e_1 + e_{h+1}) = 0
        assert_eq!(regular_nilpotent_witness(&q, 2, 1).unwrap().to_string(), "-1,1;-1,1");
        assert_eq!(regular_nilpotent_witness(&q, 3, 2).unwrap().to_string(), "0,1,0;-1,0,1;0,1,0");
    }

    #[test]
    fn regular_witness_postconditions_4_2() {
        let q = Rationals;
        let x = regular_nilpotent_witness(&q, 4, 2).unwrap();
        assert!(x.pow(4).unwrap().is_zero());
        assert_eq!(x.pow(3).unwrap().rank(), 1);
        assert!(!q.is_zero(&x.leading_submatrix(2).unwrap().determinant().unwrap()));
        // the defining equations themselves
        let e = |k: usize| -> Vec<_> { (0..4).map(|r| if r == k { q.one() } else { q.zero() }).collect() };
        let sum = |a: Vec<_>, b: Vec<_>| -> Vec<_> { a.iter().zip(&b).map(|(x, y)| q.add(x, y)).collect() };
        assert_eq!(x.mul_vec(&e(3)), e(2));
        assert_eq!(x.mul_vec(&e(2)), e(1));
        assert_eq!(x.mul_vec(&e(1)), sum(e(0), e(2)));
        assert!(x.mul_vec(&sum(e(0), e(2))).iter().all(|v| q.is_zero(v)));
    }

    #[test]
    fn regular_witness_rejects_bad_h() {
        let q = Rationals;
        assert!(regular_nilpotent_witness(&q, 3, 0).is_err());
        assert!(regular_nilpotent_witness(&q, 3, 3).is_err());
        assert!(regular_nilpotent_witness(&q, 1, 1).is_err());
    }

    #[test]
    fn existence_witness_examples() {
        let q = Rationals;
        let l = part("3,2");
        let x3 = existence_witness(&q, &l, 3).unwrap();
        assert!(has_jordan_type(&x3, &l));
        assert_eq!(x3.leading_submatrix(3).unwrap().stable_rank().unwrap(), 3);
        let x4 = existence_witness(&q, &l, 4).unwrap();
        assert!(has_jordan_type(&x4, &l));
        assert_eq!(x4.leading_submatrix(4).unwrap().stable_rank().unwrap(), 2);

        let col = Partition::column(4);
        for i in 1..4 {
            let x = existence_witness(&q, &col, i).unwrap();
            assert!(x.is_zero());
            assert_eq!(d_value(&col, i).unwrap(), 0);
        }
        assert!(existence_witness(&q, &l, 5).is_err());
        assert!(existence_witness(&q, &l, 0).is_err());
    }

    #[test]
    fn existence_witness_over_f2() {
        let f = PrimeField::new(2).unwrap();
        let l = part("4,2,1");
        for i in 1..7 {
            let x = existence_witness(&f, &l, i).unwrap();
            assert!(has_jordan_type(&x, &l));
            let sr = x.leading_submatrix(i).unwrap().stable_rank().unwrap();
            assert_eq!(sr, d_value(&l, i).unwrap(), "i={i}");
        }
    }

    #[test]
    fn random_invertible_contract() {
        let mut rng = TrialRng::derive(1, "inv", 0);
        let f = PrimeField::new(2).unwrap();
        for n in 1..6 {
            let g = random_invertible(&f, n, &mut rng, 0);
            assert_ne!(g.determinant().unwrap(), 0);
        }
        let a = random_invertible(&Rationals, 4, &mut TrialRng::derive(5, "inv", 3), 3);
        let b = random_invertible(&Rationals, 4, &mut TrialRng::derive(5, "inv", 3), 3);
        assert_eq!(a, b);
        let one = random_invertible(&Rationals, 1, &mut rng, 3);
        assert!(!Rationals.is_zero(one.get(0, 0)));
    }

    #[test]
    fn orbit_sample_identity_conjugator() {
        let q = Rationals;
        let l = part("3,2");
        let s = OrbitSample::from_conjugator(&l, Matrix::identity(&q, 5), String::new()).unwrap();
        assert_eq!(s.matrix, jordan_matrix(&q, &l));
    }

    #[test]
    fn orbit_sample_rank_certificate() {
        let q = Rationals;
        let l = part("3,2,2,1");
        let mut rng = TrialRng::derive(9, "orbit", 0);
        let s = random_orbit_element(&q, &l, &mut rng, 3).unwrap();
        assert_eq!(rank_sequence(&s.matrix).unwrap(), vec![8, 4, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(s.seed, TrialRng::derive(9, "orbit", 0).seed_hex());
    }

    #[test]
    fn invariant_subspace_examples() {
        let q = Rationals;
        let j3 = jordan_matrix(&q, &Partition::row(3));
        let full = Subspace::full(&q, 3);
        assert_eq!(max_invariant_subspace(&j3, &full).unwrap(), full);

        let e1 = Subspace::coordinate(&q, 3, 1);
        assert_eq!(max_invariant_subspace(&j3, &e1).unwrap().dim(), 1);

        let e3 = Subspace::span(&q, 3, &[vec![q.zero(), q.zero(), q.one()]]).unwrap();
        let (u, steps) = max_invariant_subspace_with_steps(&j3, &e3).unwrap();
        assert_eq!(u.dim(), 0);
        assert_eq!(steps, 1);

        let wrong = Subspace::full(&q, 2);
        assert!(max_invariant_subspace(&j3, &wrong).is_err());
    }

    #[test]
    fn subspace_span_drops_dependent_vectors() {
        let q = Rationals;
        let v = |a: i64, b: i64| vec![q.int(a), q.int(b)];
        let s = Subspace::span(&q, 2, &[v(1, 2), v(2, 4), v(0, 1)]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(Subspace::span(&q, 2, &[vec![q.one()]]).is_err());
    }
}
