//! Finite-chain test oracle for the concentration bound: stationary
//! distribution, the fundamental-like function g with (I−P)g = f − α·1 and
//! πᵀg = 0, and the bound's right-hand side.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::OracleError;

pub use super::constants::hoeffding_chain_bound_raw as hoeffding_chain_bound;

fn validate_stochastic(p: &DMatrix<f64>) -> Result<(), OracleError> {
    let n = p.nrows();
    assert_eq!(n, p.ncols(), "transition matrix must be square");
    for i in 0..n {
        let mut sum = 0.0;
        for j in 0..n {
            if p[(i, j)] < 0.0 {
                return Err(OracleError::NegativeTransition { i, j });
            }
            sum += p[(i, j)];
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(OracleError::NotRowStochastic { row: i, sum });
        }
    }
    Ok(())
}

fn is_strongly_connected(p: &DMatrix<f64>) -> bool {
    let n = p.nrows();
    let reachable = |transpose: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                let w = if transpose { p[(u, v)] } else { p[(v, u)] };
                if w > 0.0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reachable(false) && reachable(true)
}

/// Period of an irreducible chain: gcd over edges (u,v) of level(u)+1−level(v)
/// on a BFS tree from state 0.
fn period(p: &DMatrix<f64>) -> usize {
    let n = p.nrows();
    let mut level = vec![None::<i64>; n];
    level[0] = Some(0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut g: i64 = 0;
    while let Some(v) = queue.pop_front() {
        for u in 0..n {
            if p[(v, u)] > 0.0 {
                match level[u] {
                    None => {
                        level[u] = Some(level[v].unwrap() + 1);
                        queue.push_back(u);
                    }
                    Some(lu) => {
                        let diff = (level[v].unwrap() + 1 - lu).abs();
                        g = gcd(g, diff);
                    }
                }
            }
        }
    }
    if g == 0 {
        0
    } else {
        g as usize
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Unique stationary distribution of an irreducible aperiodic finite chain.
pub fn stationary_distribution(p: &DMatrix<f64>) -> Result<DVector<f64>, OracleError> {
    validate_stochastic(p)?;
    if !is_strongly_connected(p) {
        return Err(OracleError::ReducibleChain);
    }
    let d = period(p);
    if d > 1 {
        return Err(OracleError::PeriodicChain(d));
    }
    let n = p.nrows();
    // πᵀ(I−P) = 0 with Σπ = 1: transpose system, last equation replaced by
    // the normalization.
    let mut m = (DMatrix::identity(n, n) - p).transpose();
    for j in 0..n {
        m[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    m.lu().solve(&rhs).ok_or(OracleError::SolveFailed)
}

/// α = πᵀf and the solution g of (I−P)g = f − α·1 with πᵀg = 0
/// (the summed conditional deviations of f along the chain).
pub fn fundamental_g(
    p: &DMatrix<f64>,
    f: &DVector<f64>,
) -> Result<(f64, DVector<f64>), OracleError> {
    let pi = stationary_distribution(p)?;
    let n = p.nrows();
    assert_eq!(f.len(), n, "f must have one value per state");
    let alpha = pi.dot(f);
    let a = DMatrix::identity(n, n) - p;
    let b = f - DVector::from_element(n, alpha);
    // (I−P) is rank n−1 with left null space span(π) ⟂ b; pin the solution
    // with the πᵀg = 0 constraint through the normal equations of the
    // stacked system [A; πᵀ].
    let normal = a.transpose() * &a + &pi * pi.transpose();
    let rhs = a.transpose() * &b;
    let g = normal.lu().solve(&rhs).ok_or(OracleError::SolveFailed)?;
    let residual = (&a * &g - &b).norm().max(pi.dot(&g).abs());
    if residual > 1e-10 {
        return Err(OracleError::ResidualTooLarge {
            residual,
            tolerance: 1e-10,
        });
    }
    Ok((alpha, g))
}

/// Time average S_f(t) = (1/t)·Σ_{i=0}^{t−1} f(X(i)) of one seeded chain
/// trajectory started at `start`.
pub fn sample_chain_average(
    p: &DMatrix<f64>,
    f: &DVector<f64>,
    start: usize,
    t: u64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let n = p.nrows();
    let mut cumulative = vec![0.0; n * n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += p[(i, j)];
            cumulative[i * n + j] = acc;
        }
    }
    let mut state = start;
    let mut sum = 0.0;
    for _ in 0..t {
        sum += f[state];
        let u: f64 = rng.random();
        let row = &cumulative[state * n..(state + 1) * n];
        state = row.iter().position(|&c| u < c).unwrap_or(n - 1);
    }
    sum / t as f64
}

/// The two-state test chain P = [[0.9, 0.1], [0.5, 0.5]] with f = (1, 0):
/// π = (5/6, 1/6), α = 5/6, g = (5/18, −25/18).
pub fn two_state_test_chain() -> (DMatrix<f64>, DVector<f64>) {
    (
        DMatrix::from_row_slice(2, 2, &[0.9, 0.1, 0.5, 0.5]),
        DVector::from_column_slice(&[1.0, 0.0]),
    )
}
