use maxconv_core::{convolution_tree, Operator, PStar, Pmf};

fn lcg(state: &mut u64) -> f64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    0.05 + 0.95 * ((*state >> 11) as f64 / (1u64 << 53) as f64)
}

fn instance(n: usize, k: usize, seed: u64) -> (Vec<Pmf>, Pmf) {
    let mut s = seed;
    let priors: Vec<Pmf> = (0..n)
        .map(|j| Pmf::new(2 - j as i64, (0..k).map(|_| lcg(&mut s)).collect()).unwrap())
        .collect();
    let lo: i64 = priors.iter().map(Pmf::first_outcome).sum();
    let hi: i64 = priors.iter().map(Pmf::last_outcome).sum();
    let evidence = Pmf::new(lo, (lo..=hi).map(|_| lcg(&mut s)).collect()).unwrap();
    (priors, evidence)
}

/// Enumerates every joint outcome; `combine` is `+` or `max`.
fn brute_force(priors: &[Pmf], evidence: &Pmf, combine: fn(f64, f64) -> f64) -> Vec<Vec<f64>> {
    let n = priors.len();
    let mut out: Vec<Vec<f64>> = priors.iter().map(|p| vec![0.0; p.len()]).collect();
    let joints: usize = priors.iter().map(Pmf::len).product();
    for code in 0..joints {
        let mut rest = code;
        let idx: Vec<usize> = priors
            .iter()
            .map(|p| {
                let i = rest % p.len();
                rest /= p.len();
                i
            })
            .collect();
        let total: i64 = priors.iter().zip(&idx).map(|(p, &i)| p.first_outcome() + i as i64).sum();
        for i in 0..n {
            let w = (0..n).filter(|&j| j != i).map(|j| priors[j].values()[idx[j]]).product::<f64>()
                * evidence.get(total);
            out[i][idx[i]] = combine(out[i][idx[i]], w);
        }
    }
    out
}

#[test]
fn sum_tree_matches_enumeration() {
    for (n, k) in [(1, 3), (2, 2), (2, 5), (3, 4), (4, 4), (5, 3), (6, 2)] {
        let (priors, evidence) = instance(n, k, 31 + n as u64);
        let tree = convolution_tree(&priors, &evidence, &Operator::Sum).unwrap();
        for (got, want) in tree.likelihoods.iter().zip(brute_force(&priors, &evidence, |a, b| a + b)) {
            let total: f64 = want.iter().sum();
            for (a, b) in got.values().iter().zip(&want) {
                assert!((a - b / total).abs() < 1e-12, "n={n} k={k}");
            }
        }
    }
}

#[test]
fn max_tree_matches_enumeration() {
    for (n, k) in [(1, 4), (2, 2), (3, 3), (3, 4), (4, 4)] {
        let (priors, evidence) = instance(n, k, 77 + k as u64);
        let tree = convolution_tree(&priors, &evidence, &Operator::NaiveMax).unwrap();
        for (got, want) in tree.likelihoods.iter().zip(brute_force(&priors, &evidence, f64::max)) {
            let want = Pmf::new(got.offset(), want).unwrap().normalize_max().unwrap();
            assert_eq!(got.argmax(), want.argmax());
            for (a, b) in got.values().iter().zip(want.values()) {
                assert!((a - b).abs() < 1e-12, "n={n} k={k}");
            }
        }
    }
}

#[test]
fn padding_is_neutral() {
    for op in [Operator::Sum, Operator::NaiveMax] {
        let (mut priors, evidence) = instance(3, 4, 5);
        let plain = convolution_tree(&priors, &evidence, &op).unwrap();
        priors.push(Pmf::delta(0, 1.0).unwrap());
        let padded = convolution_tree(&priors, &evidence, &op).unwrap();
        assert_eq!(padded.likelihoods.len(), 4);
        for (a, b) in plain.likelihoods.iter().zip(&padded.likelihoods) {
            assert_eq!(a.offset(), b.offset());
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn scaling_a_prior_changes_nothing() {
    for op in [Operator::Sum, Operator::NaiveMax] {
        let (priors, evidence) = instance(5, 4, 9);
        let base = convolution_tree(&priors, &evidence, &op).unwrap();
        let mut scaled = priors.clone();
        scaled[2] = scaled[2].scale(37.5).unwrap();
        let other = convolution_tree(&scaled, &evidence, &op).unwrap();
        for (a, b) in base.likelihoods.iter().zip(&other.likelihoods) {
            assert_eq!(a.argmax(), b.argmax());
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn sum_root_is_normalized_distribution_of_total() {
    let (priors, evidence) = instance(5, 6, 3);
    let tree = convolution_tree(&priors, &evidence, &Operator::Sum).unwrap();
    assert!((tree.sum_prior.sum() - 1.0).abs() < 1e-9);
    assert_eq!(tree.sum_prior.first_outcome(), evidence.first_outcome());
    assert_eq!(tree.sum_prior.last_outcome(), evidence.last_outcome());
}

#[test]
fn p_norm_tree_tracks_naive_tree_on_small_supports() {
    // Small supports take the exact inner convolution, so the only error is
    // the p-norm overestimate, at most a factor t^(1/p) per merge.
    let (priors, evidence) = instance(4, 3, 12);
    let naive = convolution_tree(&priors, &evidence, &Operator::NaiveMax).unwrap();
    let op = Operator::PNorm(PStar::new(64.0).unwrap());
    let numeric = convolution_tree(&priors, &evidence, &op).unwrap();
    for (a, b) in naive.likelihoods.iter().zip(&numeric.likelihoods) {
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x / y - 1.0).abs() < 0.1, "{x} vs {y}");
        }
    }
}
