//! Brute-force oracles, independent of the closed forms they check.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use schur_ample::bounds::decompose_degree;
use schur_ample::linalg::Matrix;
use schur_ample::partition::{partitions_up_to, schur_dim, Partition};
use schur_ample::poly::{multi_indices, n_delta, Chart, HomogPoly, MultiIndex, Rational, Scalar};
use schur_ample::rng::stream_rng;
use schur_ample::universal::{theta, FlagFrame, Instance, ParameterPoint};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Counts semistandard tableaux of shape `λ` with entries in `1..=n` by
/// filling cells row by row.
fn count_ssyt(lambda: &[u32], n: u32) -> u64 {
    let cells: Vec<(usize, usize)> = lambda
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<u32>> = lambda.iter().map(|&l| vec![0; l as usize]).collect();
    fn rec(i: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<u32>>, n: u32) -> u64 {
        if i == cells.len() {
            return 1;
        }
        let (r, c) = cells[i];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        let mut total = 0;
        for v in lo_row.max(lo_col)..=n {
            grid[r][c] = v;
            total += rec(i + 1, cells, grid, n);
        }
        grid[r][c] = 0;
        total
    }
    rec(0, &cells, &mut grid, n)
}

#[test]
fn schur_dim_matches_tableau_count() {
    for lambda in partitions_up_to(6) {
        for n in 1..=4 {
            assert_eq!(
                schur_dim(&lambda, n),
                BigUint::from(count_ssyt(lambda.parts(), n)),
                "λ = {lambda:?}, n = {n}"
            );
        }
    }
}

#[test]
fn conjugate_matches_diagram_transpose() {
    for lambda in partitions_up_to(9) {
        let cells: Vec<(u32, u32)> = lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(r, &l)| (0..l).map(move |c| (r as u32, c)))
            .collect();
        let width = lambda.largest();
        let cols: Vec<u32> = (0..width)
            .map(|c| cells.iter().filter(|&&(_, cc)| cc == c).count() as u32)
            .collect();
        assert_eq!(lambda.conjugate(), Partition::new(cols).unwrap());
    }
}

#[test]
fn n_delta_matches_enumeration() {
    for n in 1..=5u32 {
        for d in 0..=5 {
            assert_eq!(
                n_delta(n, d),
                BigUint::from(multi_indices(n as usize + 1, d).len())
            );
        }
    }
}

/// `f'(0)` for a polynomial of degree `≤ d`, exactly, from its values at
/// `t = 0, …, d` via the derivatives of the Lagrange basis.
fn derivative_at_zero(values: &[Rational]) -> Rational {
    let nodes: Vec<Rational> = (0..values.len() as i64).map(q).collect();
    let mut total = <Rational as Zero>::zero();
    for (j, fj) in values.iter().enumerate() {
        // L_j'(0) = Σ_{m≠j} 1/(t_j − t_m) ∏_{i≠j,m} (0 − t_i)/(t_j − t_i)
        let mut lj = <Rational as Zero>::zero();
        for m in 0..nodes.len() {
            if m == j {
                continue;
            }
            let mut term = <Rational as One>::one() / (&nodes[j] - &nodes[m]);
            for i in 0..nodes.len() {
                if i != j && i != m {
                    term *= -&nodes[i] / (&nodes[j] - &nodes[i]);
                }
            }
            lj += term;
        }
        total += fj * lj;
    }
    total
}

fn along(x: &[Rational], w: &[Rational], t: i64) -> Vec<Rational> {
    x.iter().zip(w).map(|(a, b)| a + b * q(t)).collect()
}

#[test]
fn dir_derivative_matches_interpolation() {
    let mut rng = stream_rng(31, &[]);
    for trial in 0..40 {
        let nvars = 2 + trial % 3;
        let d = 1 + (trial % 4) as u32;
        let p = HomogPoly::<Rational>::random(&(), nvars, d, &mut rng, 20);
        let chart = Chart::new(trial % nvars);
        let x: Vec<Rational> = (0..nvars)
            .map(|_| Scalar::random_nonzero(&(), &mut rng, 20))
            .collect();
        let v: Vec<Rational> = (0..nvars - 1)
            .map(|_| Scalar::random(&(), &mut rng, 20))
            .collect();
        let xn = chart.normalize(&x).unwrap();
        let w = chart.lift(&v, nvars).unwrap();
        let values: Vec<Rational> = (0..=d as i64)
            .map(|t| p.eval(&along(&xn, &w, t)).unwrap())
            .collect();
        assert_eq!(
            p.dir_derivative(chart, &x, &v).unwrap(),
            derivative_at_zero(&values)
        );
    }
}

#[test]
fn theta_matches_derivative_of_the_equation_term() {
    // θ_J(v) ξ^{rJ}(x) = d(a_J ξ^{(r+1)J})(x, v) where ξ^J(x) ≠ 0
    let mut rng = stream_rng(32, &[]);
    for (n, k, delta, eps, r) in [
        (2, 1, 1, 1, 1),
        (2, 1, 2, 1, 2),
        (3, 2, 2, 2, 1),
        (3, 1, 1, 1, 0),
    ] {
        let inst = Instance::new(n, k, delta, eps, r).unwrap();
        let a = ParameterPoint::<Rational>::random(&(), &inst, &mut rng, 20);
        let nvars = inst.nvars();
        let x: Vec<Rational> = (0..nvars)
            .map(|i| {
                if i == 0 {
                    <Rational as One>::one()
                } else {
                    Scalar::random_nonzero(&(), &mut rng, 20)
                }
            })
            .collect();
        let vs: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..n).map(|_| Scalar::random(&(), &mut rng, 20)).collect())
            .collect();
        let frame = FlagFrame::new(Chart::new(0), x.clone(), vs.clone()).unwrap();
        for (j, aj) in a.columns().iter().zip(a.coeffs()) {
            let term = aj.mul(&HomogPoly::xi_power(&(), j.scale(r + 1))).unwrap();
            let zr = monomial(&j.scale(r), &x);
            for (i, v) in vs.iter().enumerate() {
                let w = Chart::new(0).lift(v, nvars).unwrap();
                let values: Vec<Rational> = (0..=term.degree() as i64)
                    .map(|t| term.eval(&along(&x, &w, t)).unwrap())
                    .collect();
                let expected = derivative_at_zero(&values) / &zr;
                assert_eq!(theta(&inst, &a, j, &frame, i + 1).unwrap(), expected);
            }
        }
    }
}

fn monomial(j: &MultiIndex, x: &[Rational]) -> Rational {
    j.exponents()
        .iter()
        .zip(x)
        .fold(<Rational as One>::one(), |acc, (&e, xi)| {
            acc * Scalar::pow(xi, e as u64)
        })
}

/// Determinant by the permutation expansion.
fn leibniz_det(m: &[Vec<Rational>]) -> Rational {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(vec![], true)];
        }
        let mut out = Vec::new();
        for (p, even) in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut np = p.clone();
                np.insert(pos, n - 1);
                // inserting at `pos` moves n−1 past p.len() − pos entries
                let flips = (p.len() - pos) % 2 == 1;
                out.push((np, even != flips));
            }
        }
        out
    }
    let mut total = <Rational as Zero>::zero();
    for (p, even) in perms(m.len()) {
        let prod = p
            .iter()
            .enumerate()
            .fold(<Rational as One>::one(), |acc, (r, &c)| acc * &m[r][c]);
        if even {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

#[test]
fn determinant_matches_permutation_expansion() {
    let mut rng = stream_rng(33, &[]);
    for size in 1..=5 {
        for _ in 0..6 {
            let rows: Vec<Vec<Rational>> = (0..size)
                .map(|_| {
                    (0..size)
                        .map(|_| Scalar::random(&(), &mut rng, 9))
                        .collect()
                })
                .collect();
            assert_eq!(Matrix::from_rows(rows.clone()).det(), leibniz_det(&rows));
        }
    }
}

#[test]
fn decomposition_matches_exhaustive_search() {
    for d in 1..=20u64 {
        let (a, b) = (d + 1, d + 2);
        let representable = |d0: u64| (0..=d0 / b).any(|q| (d0 - q * b).is_multiple_of(a));
        let threshold = d * (d + 1);
        // the threshold is sharp: d(d+1) − 1 is the Frobenius number of (d+1, d+2)
        assert!(!representable(threshold - 1));
        for d0 in 0..threshold + 3 * b {
            let res = decompose_degree(&BigUint::from(d), &BigUint::from(d0));
            if d0 < threshold {
                assert!(res.is_err());
            } else {
                assert!(representable(d0));
                let (p, qq) = res.unwrap();
                assert_eq!(p * a + qq * b, BigUint::from(d0));
            }
        }
    }
}
