//! Partitions, compositions and the shape of a parabolic nilradical.
//!
//! A composition `ν` of `n` fixes the diagonal block sizes of a standard
//! parabolic `P_ν ⊆ GL_n`; its nilradical `𝔲_P` consists of the positions
//! strictly above the diagonal blocks. The Jordan type of the dense orbit in
//! `𝔲_P` is the partition `λ`, the transpose of `ν` sorted in weakly
//! decreasing order. `d_{λ,i}` counts the free positions of `𝔲_P` on the
//! `(n-i)`-th upper codiagonal and depends on `λ` only.
//!
//! Index conventions: codiagonal indices `i` and partition part indices `j`
//! are 1-based as in the usual notation; matrix positions are 0-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Plain decimal lists such as `"2,1,2"`.
fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{p:?}: {e}")))
        })
        .collect()
}

fn fmt_parts(parts: &[usize], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (k, p) in parts.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
    n: usize,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!(
                "nonpositive part in {parts:?}"
            )));
        }
        let n = parts.iter().sum();
        Ok(Composition { parts, n })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Partial sums `ν_1, ν_1+ν_2, …` strictly below `n`: the block boundaries.
    pub fn boundaries(&self) -> Vec<usize> {
        self.parts[..self.parts.len() - 1]
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// The parts sorted in weakly decreasing order.
    pub fn sorted(&self) -> Partition {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts, n: self.n }
    }

    /// All compositions of `n` (there are `2^(n-1)`), in lexicographic order of parts.
    pub fn all(n: usize) -> Vec<Composition> {
        fn rec(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition::new(prefix.clone()).expect("positive parts"));
                return;
            }
            for first in 1..=rest {
                prefix.push(first);
                rec(rest - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Composition::new(parse_parts(s)?)
    }
}

/// A weakly decreasing list of positive parts. Parts past the length read as 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        let n = parts.iter().sum();
        Ok(Partition { parts, n })
    }

    /// The single-block partition `(n)`.
    pub fn row(n: usize) -> Self {
        let parts = if n == 0 { Vec::new() } else { vec![n] };
        Partition { parts, n }
    }

    /// The partition `(1, …, 1)` of `n`.
    pub fn column(n: usize) -> Self {
        Partition {
            parts: vec![1; n],
            n,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nonzero parts, `r`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_j` for 1-based `j`, zero past the length.
    pub fn part(&self, j: usize) -> usize {
        assert!(j >= 1, "parts are 1-indexed");
        self.parts.get(j - 1).copied().unwrap_or(0)
    }

    /// The conjugate partition: column lengths of the Young diagram.
    pub fn transpose(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|k| self.parts.iter().take_while(|&&p| p >= k).count())
            .collect();
        Partition { parts, n: self.n }
    }

    /// `Σ_{j≤k} λ_j` with zero padding.
    pub fn prefix_sum(&self, k: usize) -> usize {
        self.parts.iter().take(k).sum()
    }

    /// All partitions of `n` in descending lexicographic order, `(n)` first.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                    n: prefix.iter().sum(),
                });
                return;
            }
            for first in (1..=rest.min(max)).rev() {
                prefix.push(first);
                rec(rest - first, first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.parts, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

/// Jordan type of the Richardson orbit of `P_ν`: the transpose of the sorted `ν`.
pub fn richardson_partition(nu: &Composition) -> Partition {
    nu.sorted().transpose()
}

/// Zero/nonzero pattern of the nilradical `𝔲_P` of `P_ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicShape {
    nu: Composition,
    block_of: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl ParabolicShape {
    pub fn new(nu: &Composition) -> Self {
        let block_of: Vec<usize> = nu
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
            .collect();
        let n = nu.n();
        let mut free = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if block_of[a] != block_of[b] {
                    free.push((a, b));
                }
            }
        }
        ParabolicShape {
            nu: nu.clone(),
            block_of,
            free,
        }
    }

    pub fn n(&self) -> usize {
        self.nu.n()
    }

    pub fn nu(&self) -> &Composition {
        &self.nu
    }

    /// Free positions `(a, b)`, 0-based, in row-major order.
    pub fn free_positions(&self) -> &[(usize, usize)] {
        &self.free
    }

    pub fn is_free(&self, a: usize, b: usize) -> bool {
        a < b && self.block_of[a] != self.block_of[b]
    }

    /// 0-based index of the diagonal block containing row/column `a`.
    pub fn block_of(&self, a: usize) -> usize {
        self.block_of[a]
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Free positions counted per codiagonal, reported as `d_{λ,1}, …, d_{λ,n-1}`.
    pub fn codiagonal_counts(&self) -> DVector {
        let n = self.n();
        let mut values = vec![0; n.saturating_sub(1)];
        for &(a, b) in &self.free {
            // (a, b) lies on the (b - a)-th codiagonal, which is reported at i = n - (b - a)
            values[n - (b - a) - 1] += 1;
        }
        DVector { values }
    }
}

/// The vector `(d_{λ,1}, …, d_{λ,n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DVector {
    values: Vec<usize>,
}

impl DVector {
    pub fn from_partition(lambda: &Partition) -> Self {
        let n = lambda.n();
        let values = (1..n)
            .map(|i| d_value(lambda, i).expect("index in range"))
            .collect();
        DVector { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `d_{λ,i}` for 1-based `i`.
    pub fn get(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn sum(&self) -> usize {
        self.values.iter().sum()
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(&self.values, f)
    }
}

/// `d_{λ,i} = i − Σ_{j>n−i} λ_j`, λ zero-padded, for `1 ≤ i ≤ n−1`.
pub fn d_value(lambda: &Partition, i: usize) -> Result<usize> {
    let n = lambda.n();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    let tail: usize = lambda.parts().iter().skip(n - i).sum();
    Ok(i - tail)
}

/// `Σ_{j>n−i} λ_j`: the dimension bound for invariant subspaces of an
/// `i`-dimensional subspace. Defined for `0 ≤ i ≤ n`.
pub fn invariant_dim_bound(lambda: &Partition, i: usize) -> usize {
    let n = lambda.n();
    assert!(i <= n);
    lambda.parts().iter().skip(n - i).sum()
}

/// Returns `(dim 𝔲_P, dim 𝒪_λ)` for the parabolic `P_ν`.
pub fn dimensions(nu: &Composition) -> (usize, usize) {
    let n = nu.n();
    let squares: usize = nu.parts().iter().map(|p| p * p).sum();
    let dim_u = (n * n - squares) / 2;
    (dim_u, 2 * dim_u)
}

/// Dominance order `μ ⊴ λ`: every prefix sum of `μ` is at most that of `λ`.
///
/// For nilpotent orbits of `GL_n` this is the closure order:
/// `𝒪_μ ⊆ cl(𝒪_λ)` iff `μ ⊴ λ` (Gerstenhaber–Hesselink).
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<bool> {
    if mu.n() != lambda.n() {
        return Err(Error::SizeMismatch(mu.n(), lambda.n()));
    }
    let len = mu.len().max(lambda.len());
    Ok((1..=len).all(|k| mu.prefix_sum(k) <= lambda.prefix_sum(k)))
}

/// All `μ ◁ λ`, `μ ≠ λ`, in descending lexicographic order.
pub fn strictly_dominated(lambda: &Partition) -> Vec<Partition> {
    Partition::all(lambda.n())
        .into_iter()
        .filter(|mu| mu != lambda && dominance_leq(mu, lambda).expect("same n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn richardson_examples() {
        assert_eq!(richardson_partition(&comp("2,1,2")), part("3,2"));
        assert_eq!(richardson_partition(&comp("1,1,1,1,1")), part("5"));
        assert_eq!(richardson_partition(&comp("5")), part("1,1,1,1,1"));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            Composition::new(vec![]),
            Err(Error::InvalidComposition(_))
        ));
        assert!(matches!(
            Composition::new(vec![2, 0, 1]),
            Err(Error::InvalidComposition(_))
        ));
        assert!("2,x".parse::<Composition>().is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn codiagonal_examples() {
        let counts = |s: &str| ParabolicShape::new(&comp(s)).codiagonal_counts();
        assert_eq!(counts("2,1,2").values(), &[1, 2, 3, 2]);
        assert_eq!(counts("1,1,1,1,1").values(), &[1, 2, 3, 4]);
        assert_eq!(counts("5").values(), &[0, 0, 0, 0]);
    }

    #[test]
    fn shape_matches_figure() {
        // rows 1-2 free in columns 3-5, row 3 free in columns 4-5
        let shape = ParabolicShape::new(&comp("2,1,2"));
        let expected = vec![
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
        ];
        assert_eq!(shape.free_positions(), expected.as_slice());
        assert_eq!(shape.dim(), 8);
        assert_eq!(comp("2,1,2").boundaries(), vec![2, 3]);
    }

    #[test]
    fn d_value_examples() {
        assert_eq!(d_value(&part("3,2"), 1).unwrap(), 1);
        for n in 2..9 {
            for i in 1..n {
                assert_eq!(d_value(&Partition::row(n), i).unwrap(), i);
                assert_eq!(d_value(&Partition::column(n), i).unwrap(), 0);
            }
        }
        assert!(matches!(
            d_value(&part("3,2"), 5),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(d_value(&part("3,2"), 0).is_err());
    }

    #[test]
    fn padded_sum_form_agrees() {
        // Σ_{j=1}^{n-i} (λ_j - 1) with zero parts contributing -1
        for n in 2..9 {
            for lambda in Partition::all(n) {
                for i in 1..n {
                    let padded: i64 = (1..=n - i).map(|j| lambda.part(j) as i64 - 1).sum();
                    assert_eq!(padded, d_value(&lambda, i).unwrap() as i64, "{lambda} {i}");
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimensions(&comp("2,1,2")), (8, 16));
        assert_eq!(dimensions(&comp("1,1,1,1,1")), (10, 20));
        assert_eq!(dimensions(&comp("5")), (0, 0));
    }

    #[test]
    fn dominance_examples() {
        let l = part("3,2");
        assert!(dominance_leq(&l, &l).unwrap());
        assert!(dominance_leq(&part("1,1,1,1,1"), &l).unwrap());
        assert!(dominance_leq(&part("2,2"), &part("3,1")).unwrap());
        assert!(!dominance_leq(&part("3,1"), &part("2,2")).unwrap());
        assert_eq!(
            dominance_leq(&part("2,1"), &part("2,2")),
            Err(Error::SizeMismatch(3, 4))
        );
    }

    #[test]
    fn strictly_dominated_examples() {
        assert_eq!(strictly_dominated(&part("2,1")), vec![part("1,1,1")]);
        assert!(strictly_dominated(&Partition::column(5)).is_empty());
        let below: Vec<String> = strictly_dominated(&part("3,2"))
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(below, ["3,1,1", "2,2,1", "2,1,1,1", "1,1,1,1,1"]);
    }

    #[test]
    fn enumeration_counts() {
        let partition_counts = [1, 1, 2, 3, 5, 7, 11, 15, 22];
        for (n, &count) in partition_counts.iter().enumerate() {
            assert_eq!(Partition::all(n).len(), count);
        }
        for n in 1..9 {
            assert_eq!(Composition::all(n).len(), 1 << (n - 1));
        }
        let all = Partition::all(5);
        assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
    }

    #[test]
    fn transpose_is_involution() {
        for n in 0..9 {
            for p in Partition::all(n) {
                assert_eq!(p.transpose().transpose(), p);
                assert_eq!(p.transpose().n(), n);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(comp("2, 1,2").to_string(), "2,1,2");
        assert_eq!(part("(3,2)").to_string(), "3,2");
    }
}
