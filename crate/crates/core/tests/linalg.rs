use nilorbit::constructions::{jordan_matrix, random_invertible, random_matrix};
use nilorbit::{Field, Matrix, Partition, PrimeField, Rationals, TrialRng};
use proptest::prelude::*;

/// Determinant by the Leibniz permutation sum.
fn leibniz<F: Field>(m: &Matrix<F>) -> F::Elem {
    let f = m.field();
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = f.zero();
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for a in 0..n {
            for b in a + 1..n {
                if p[a] > p[b] {
                    inversions += 1;
                }
            }
        }
        let term = (0..n).fold(f.one(), |acc, r| f.mul(&acc, m.get(r, p[r])));
        total = if inversions % 2 == 0 { f.add(&total, &term) } else { f.sub(&total, &term) };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for j in k..p.len() {
        p.swap(k, j);
        permute(p, k + 1, visit);
        p.swap(k, j);
    }
}

/// `s_j` by summing every principal `j×j` minor.
fn brute_minor_sums<F: Field>(m: &Matrix<F>) -> Vec<F::Elem> {
    let f = m.field();
    let n = m.rows();
    let mut sums = vec![f.zero(); n + 1];
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
        let minor = leibniz(&m.select(&idx, &idx));
        let j = idx.len();
        sums[j] = f.add(&sums[j], &minor);
    }
    sums
}

/// Mixes dense, low-rank and conjugated nilpotent-plus-invertible draws so
/// that every stable rank between 0 and `n` shows up.
fn mixed_matrix<F: Field>(f: &F, n: usize, rng: &mut TrialRng) -> Matrix<F> {
    match rng.below(3) {
        0 => random_matrix(f, n, rng, 3),
        1 => {
            let r = rng.below(n as u64 + 1) as usize;
            let a = Matrix::from_fn(f, n, r, |_, _| f.sample(rng, 3));
            let b = Matrix::from_fn(f, r, n, |_, _| f.sample(rng, 3));
            a.mul(&b).unwrap()
        }
        _ => {
            let k = rng.below(n as u64 + 1) as usize;
            let invertible = random_invertible(f, k, rng, 3);
            let nil = if n > k {
                let parts = random_partition(n - k, rng);
                jordan_matrix(f, &parts)
            } else {
                Matrix::zeros(f, 0, 0)
            };
            let block = Matrix::block_diagonal(f, &[invertible, nil]);
            let g = random_invertible(f, n, rng, 3);
            g.mul(&block).unwrap().mul(&g.inverse().unwrap()).unwrap()
        }
    }
}

fn random_partition(n: usize, rng: &mut TrialRng) -> Partition {
    let all = Partition::all(n);
    all[rng.below(all.len() as u64) as usize].clone()
}

fn stable_rank_oracle_on<F: Field>(f: &F, label: &str) {
    let mut seen = [false; 7];
    for t in 0..600 {
        let mut rng = TrialRng::derive(12, label, t);
        let n = 1 + rng.below(6) as usize;
        let m = mixed_matrix(f, n, &mut rng);
        let by_power = m.pow(n as u32).unwrap().rank();
        let s = m.principal_minor_sums().unwrap();
        let by_minors = (0..=n).rev().find(|&j| !f.is_zero(&s[j])).unwrap_or(0);
        assert_eq!(by_power, by_minors, "{label} trial {t}: {m}");
        assert_eq!(m.stable_rank().unwrap(), by_power);
        assert_eq!(m.stable_rank_by_minors().unwrap(), by_power);
        seen[by_power] = true;
    }
    assert!(seen[..6].iter().all(|&s| s), "{label}: stable ranks poorly covered {seen:?}");
}

#[test]
fn stable_rank_routes_agree_over_rationals() {
    stable_rank_oracle_on(&Rationals, "q");
}

#[test]
fn stable_rank_routes_agree_over_small_primes() {
    for p in [2, 3, 5, 7] {
        stable_rank_oracle_on(&PrimeField::new(p).unwrap(), &format!("fp{p}"));
    }
}

fn minor_sums_on<F: Field>(f: &F, label: &str) {
    for n in 0..=6 {
        for t in 0..12 {
            let mut rng = TrialRng::derive(13, label, (n * 100 + t) as u64);
            let m = mixed_matrix(f, n.max(1), &mut rng);
            let m = if n == 0 { Matrix::zeros(f, 0, 0) } else { m };
            assert_eq!(m.principal_minor_sums().unwrap(), brute_minor_sums(&m), "{m}");
            assert_eq!(m.determinant().unwrap(), leibniz(&m));
        }
    }
}

#[test]
fn principal_minor_sums_match_exhaustive_summation() {
    minor_sums_on(&Rationals, "q");
    for p in [2, 3, 5, 7] {
        minor_sums_on(&PrimeField::new(p).unwrap(), &format!("fp{p}"));
    }
}

#[test]
fn char_poly_coefficients_are_signed_minor_sums() {
    let f = PrimeField::new(3).unwrap();
    for t in 0..50 {
        let mut rng = TrialRng::derive(14, "cp", t);
        let n = 1 + rng.below(6) as usize;
        let m = random_matrix(&f, n, &mut rng, 0);
        let c = m.char_poly().unwrap();
        let s = brute_minor_sums(&m);
        assert_eq!(c.degree(), n);
        for (j, sj) in s.iter().enumerate() {
            let expected = if j % 2 == 0 { *sj } else { f.neg(sj) };
            assert_eq!(c.coefficients()[n - j], expected);
        }
    }
}

#[test]
fn empty_matrix_conventions() {
    let m = Matrix::zeros(&Rationals, 0, 0);
    assert_eq!(m.determinant().unwrap(), Rationals.one());
    assert_eq!(m.rank(), 0);
    assert_eq!(m.stable_rank().unwrap(), 0);
    assert_eq!(m.principal_minor_sums().unwrap(), vec![Rationals.one()]);
}

fn arb_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn char_poly_is_conjugation_invariant(seed in any::<u64>(), n in 1usize..=6, p in arb_prime()) {
        let f = PrimeField::new(p).unwrap();
        let mut rng = TrialRng::derive(seed, "conj", 0);
        let m = mixed_matrix(&f, n, &mut rng);
        let g = random_invertible(&f, n, &mut rng, 0);
        let c = g.mul(&m).unwrap().mul(&g.inverse().unwrap()).unwrap();
        prop_assert_eq!(m.char_poly().unwrap(), c.char_poly().unwrap());
    }

    #[test]
    fn char_poly_is_conjugation_invariant_over_rationals(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = TrialRng::derive(seed, "conj-q", 0);
        let m = mixed_matrix(&Rationals, n, &mut rng);
        let g = random_invertible(&Rationals, n, &mut rng, 3);
        let c = g.mul(&m).unwrap().mul(&g.inverse().unwrap()).unwrap();
        prop_assert_eq!(m.char_poly().unwrap(), c.char_poly().unwrap());
    }

    #[test]
    fn rank_equals_transpose_rank(seed in any::<u64>(), rows in 0usize..=6, cols in 0usize..=6, p in arb_prime()) {
        let f = PrimeField::new(p).unwrap();
        let mut rng = TrialRng::derive(seed, "rank", 0);
        let low = rng.below(rows.min(cols) as u64 + 1) as usize;
        let a = Matrix::from_fn(&f, rows, low, |_, _| f.sample(&mut rng, 0));
        let b = Matrix::from_fn(&f, low, cols, |_, _| f.sample(&mut rng, 0));
        let m = a.mul(&b).unwrap();
        prop_assert!(m.rank() <= low);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let q = Matrix::from_fn(&Rationals, rows, cols, |r, c| Rationals.int(*m.get(r, c) as i64 - 3));
        prop_assert_eq!(q.rank(), q.transpose().rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = TrialRng::derive(seed, "ker", 0);
        let m = mixed_matrix(&Rationals, n, &mut rng);
        let kernel = m.kernel();
        prop_assert_eq!(kernel.len(), n - m.rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| Rationals.is_zero(x)));
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), n in 0usize..=5) {
        let mut rng = TrialRng::derive(seed, "text", 0);
        let m = Matrix::from_fn(&Rationals, n, n, |_, _| {
            let num = rng.range_i64(-9, 9);
            let den = rng.range_i64(1, 5);
            Rationals.parse_elem(&format!("{num}/{den}")).unwrap()
        });
        prop_assert_eq!(Matrix::parse(&Rationals, &m.to_string()).unwrap(), m);
    }
}
