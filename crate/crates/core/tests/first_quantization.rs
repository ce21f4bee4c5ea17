//! Fock-space reductions against reduced matrices of explicitly (anti)symmetrized tensors.
//!
//! For `|ψ⟩ = Σ_t c_t a†(φ_t1) ⋯ a†(φ_tN)|0⟩` the amplitude `⟨0|a_r ⋯ a_k|ψ⟩` is the tensor
//! `T = Σ_t c_t Σ_P η^P φ_tP1 ⊗ ⋯ ⊗ φ_tPN`, so tracing particles means contracting slots of `T`.

use indist::fock::{apply_creation_vector, ManyBodyVector};
use indist::reduce::{trace_m_particles, trace_one_particle};
use indist::verify::{complex_gaussian, product_basis, random_vector};
use indist::{Complex64, ModeBasis, SingleParticleVector, Statistics};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    if n == 1 {
        return vec![(vec![0], 1)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting the largest element at `pos` adds n-1-pos inversions
            let s = if (n - 1 - pos).is_multiple_of(2) {
                sign
            } else {
                -sign
            };
            out.push((q, s));
        }
    }
    out
}

/// Dense rank-N tensor flattened with the first slot most significant.
fn tensor(
    terms: &[(Complex64, Vec<SingleParticleVector>)],
    dim: usize,
    stats: Statistics,
) -> Vec<Complex64> {
    let n = terms[0].1.len();
    let mut t = vec![Complex64::default(); dim.pow(n as u32)];
    for (c, orbitals) in terms {
        for (perm, sign) in permutations(n) {
            let weight = if stats == Statistics::Fermion {
                f64::from(sign)
            } else {
                1.0
            };
            for (idx, slot) in t.iter_mut().enumerate() {
                let mut rem = idx;
                let mut prod = *c * weight;
                for k in (0..n).rev() {
                    prod *= orbitals[perm[k]].amplitudes()[rem % dim];
                    rem /= dim;
                }
                *slot += prod;
            }
        }
    }
    t
}

fn fock_state(
    terms: &[(Complex64, Vec<SingleParticleVector>)],
    basis: &ModeBasis,
    stats: Statistics,
) -> ManyBodyVector {
    let mut total: Option<ManyBodyVector> = None;
    for (c, orbitals) in terms {
        let mut v = ManyBodyVector::vacuum(basis.clone(), stats);
        for o in orbitals.iter().rev() {
            v = apply_creation_vector(o, &v).unwrap();
        }
        total = Some(match total {
            None => v.scaled(*c),
            Some(acc) => acc.add_scaled(*c, &v).unwrap(),
        });
    }
    total.unwrap()
}

/// `Σ_{rest} T(rest, r) T*(rest, c)` with the contracted leading slot restricted to `first`.
fn contract(t: &[Complex64], dim: usize, first: &[usize]) -> Vec<Vec<Complex64>> {
    let mut out = vec![vec![Complex64::default(); dim]; dim];
    let rest = t.len() / dim;
    for head in 0..rest {
        if !first.contains(&(head / (rest / dim))) {
            continue;
        }
        for r in 0..dim {
            for c in 0..dim {
                out[r][c] += t[head * dim + r] * t[head * dim + c].conj();
            }
        }
    }
    out
}

fn random_terms(
    seed: u64,
    n: usize,
    count: usize,
    basis: &ModeBasis,
) -> Vec<(Complex64, Vec<SingleParticleVector>)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (
                complex_gaussian(&mut rng),
                (0..n).map(|_| random_vector(&mut rng, basis)).collect(),
            )
        })
        .collect()
}

fn max_dev(fock: &nalgebra::DMatrix<Complex64>, oracle: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (r, row) in oracle.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            worst = worst.max((fock[(r, c)] - z).norm());
        }
    }
    worst
}

fn stats_strategy() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

#[test]
fn permutation_parities() {
    let perms = permutations(3);
    assert_eq!(perms.len(), 6);
    assert_eq!(perms.iter().map(|p| p.1).sum::<i32>(), 0);
    assert!(perms.contains(&(vec![0, 1, 2], 1)));
    assert!(perms.contains(&(vec![1, 0, 2], -1)));
    assert!(perms.contains(&(vec![1, 2, 0], 1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_particle_traces_match_tensor_contractions(
        seed in any::<u64>(),
        stats in stats_strategy(),
        count in 1usize..4,
        region in prop::sample::subsequence(vec![0usize, 1, 2, 3], 1..=4),
    ) {
        let basis = product_basis(2, 2).unwrap();
        let terms = random_terms(seed, 2, count, &basis);
        let psi = fock_state(&terms, &basis, stats);
        prop_assume!(psi.norm_sqr() > 1e-8);
        let t = tensor(&terms, 4, stats);
        let norm_oracle: f64 = t.iter().map(|z| z.norm_sqr()).sum::<f64>() / 2.0;
        prop_assert!((psi.norm_sqr() - norm_oracle).abs() <= 1e-12 * norm_oracle.max(1.0));
        let reduced = trace_one_particle(&psi, &region).unwrap();
        let oracle = contract(&t, 4, &region);
        prop_assert!(max_dev(reduced.raw.entries(), &oracle) <= 1e-12 * norm_oracle.max(1.0));
    }

    #[test]
    fn three_particle_one_body_matrix(
        seed in any::<u64>(),
        stats in stats_strategy(),
        count in 1usize..3,
    ) {
        let basis = product_basis(2, 2).unwrap();
        let terms = random_terms(seed, 3, count, &basis);
        let psi = fock_state(&terms, &basis, stats);
        prop_assume!(psi.norm_sqr() > 1e-8);
        let t = tensor(&terms, 4, stats);
        let norm_oracle: f64 = t.iter().map(|z| z.norm_sqr()).sum::<f64>() / 6.0;
        prop_assert!((psi.norm_sqr() - norm_oracle).abs() <= 1e-12 * norm_oracle.max(1.0));
        let reduced = trace_m_particles(&psi, 2).unwrap();
        let oracle = contract(&t, 4, &[0, 1, 2, 3]);
        prop_assert!(max_dev(reduced.raw.entries(), &oracle) <= 1e-12 * norm_oracle.max(1.0));
    }
}
