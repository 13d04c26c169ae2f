//! Brute-force exact diagonalization of small periodic spin chains: the
//! independent oracle for every fermionic correlator in the suite.
//!
//! States live in the full 2^N space; basis bit b_i = 1 means sigma^z_i = +1.
//! All Hamiltonians here are real symmetric.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// A coefficient times a product of single-site Paulis (sites may repeat
/// only with distinct operators; not needed here).
pub struct Term {
    pub coeff: f64,
    pub ops: Vec<(usize, Pauli)>,
}

/// Apply the Pauli string to basis state `s`; returns (target state, amplitude).
fn apply_string(ops: &[(usize, Pauli)], s: usize) -> (usize, Complex64) {
    let mut t = s;
    let mut amp = Complex64::new(1.0, 0.0);
    // operators act right-to-left; for a product of single-site Paulis on
    // distinct sites the order only matters through the phases, which are
    // site-local, so a single pass is exact
    for &(site, p) in ops {
        let bit = (t >> site) & 1;
        match p {
            Pauli::Z => {
                amp *= if bit == 1 { 1.0 } else { -1.0 };
            }
            Pauli::X => {
                t ^= 1 << site;
            }
            Pauli::Y => {
                amp *= Complex64::new(0.0, if bit == 1 { 1.0 } else { -1.0 });
                t ^= 1 << site;
            }
        }
    }
    (t, amp)
}

/// Dense real symmetric matrix of a sum of Pauli-string terms.
pub fn build_hamiltonian(n: usize, terms: &[Term]) -> DMatrix<f64> {
    let dim = 1 << n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for term in terms {
        for s in 0..dim {
            let (t, amp) = apply_string(&term.ops, s);
            let v = term.coeff * amp.re;
            assert!(amp.im.abs() < 1e-14, "non-real Hamiltonian term");
            h[(t, s)] += v;
        }
    }
    h
}

/// Parity eigenvalue <psi| prod sigma^z |psi> of a real state.
/// The product over sites of (2 b_i - 1) is (-1)^(number of down spins).
pub fn parity_real(n: usize, psi: &DVector<f64>) -> f64 {
    let dim = 1 << n;
    let mut acc = 0.0;
    for s in 0..dim {
        let n_down = n as u32 - (s as u32).count_ones();
        let sign = if n_down % 2 == 0 { 1.0 } else { -1.0 };
        acc += psi[s] * psi[s] * sign;
    }
    acc
}

/// Lowest eigenvector with even parity (product of sigma^z = +1).
pub fn even_ground_state(n: usize, h: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = h.clone().symmetric_eigen();
    let mut best: Option<(f64, usize)> = None;
    for i in 0..eig.eigenvalues.len() {
        let val = eig.eigenvalues[i];
        let vec = eig.eigenvectors.column(i).into_owned();
        let p = parity_real(n, &vec);
        if p > 0.99 {
            if best.is_none() || val < best.unwrap().0 {
                best = Some((val, i));
            }
        }
    }
    let (val, idx) = best.expect("even-parity eigenstate exists");
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// <psi| sigma^x_i sigma^x_j |psi> for a complex state.
pub fn xx_expectation(psi: &DVector<Complex64>, i: usize, j: usize) -> f64 {
    let dim = psi.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..dim {
        let t = s ^ (1 << i) ^ (1 << j);
        acc += psi[t].conj() * psi[s];
    }
    assert!(acc.im.abs() < 1e-9, "xx expectation not real: {acc}");
    acc.re
}

/// <psi| sigma^x_i sigma^z_{i+1} ... sigma^z_{i+r-1} sigma^x_{i+r} |psi>
/// (string correlator; site indices taken mod N).
pub fn string_xx_expectation(n: usize, psi: &DVector<Complex64>, i: usize, r: usize) -> f64 {
    let dim = psi.len();
    let mut acc = Complex64::new(0.0, 0.0);
    let j = (i + r) % n;
    for s in 0..dim {
        let mut sign = 1.0;
        for m in 1..r {
            let site = (i + m) % n;
            if (s >> site) & 1 == 0 {
                sign = -sign;
            }
        }
        let t = s ^ (1 << i) ^ (1 << j);
        acc += psi[t].conj() * psi[s] * sign;
    }
    assert!(acc.im.abs() < 1e-9, "string expectation not real: {acc}");
    acc.re
}

pub fn to_complex(psi: &DVector<f64>) -> DVector<Complex64> {
    DVector::from_iterator(psi.len(), psi.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// RK4 evolution of i psi' = (H0 + eps(t) H1) psi.
pub fn evolve_rk4(
    h0: &DMatrix<f64>,
    h1: &DMatrix<f64>,
    eps_of_t: &dyn Fn(f64) -> f64,
    mut psi: DVector<Complex64>,
    t0: f64,
    t_out: &[f64],
    dt_max: f64,
) -> Vec<DVector<Complex64>> {
    let matvec = |m0: &DMatrix<f64>, m1: &DMatrix<f64>, eps: f64, v: &DVector<Complex64>| -> DVector<Complex64> {
        let dim = v.len();
        DVector::from_fn(dim, |i, _| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                let h = m0[(i, j)] + eps * m1[(i, j)];
                if h != 0.0 {
                    acc += h * v[j];
                }
            }
            acc * Complex64::new(0.0, -1.0)
        })
    };
    let mut t = t0;
    let mut out = Vec::with_capacity(t_out.len());
    for &target in t_out {
        while t < target - 1e-12 {
            let h = dt_max.min(target - t);
            let k1 = matvec(h0, h1, eps_of_t(t), &psi);
            let k2 = matvec(h0, h1, eps_of_t(t + 0.5 * h), &(&psi + &k1 * Complex64::new(0.5 * h, 0.0)));
            let k3 = matvec(h0, h1, eps_of_t(t + 0.5 * h), &(&psi + &k2 * Complex64::new(0.5 * h, 0.0)));
            let k4 = matvec(h0, h1, eps_of_t(t + h), &(&psi + &k3 * Complex64::new(h, 0.0)));
            psi += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
            t += h;
        }
        out.push(psi.clone());
    }
    out
}

/// Exact evolution under a time-independent Hamiltonian via its
/// eigendecomposition.
pub fn evolve_exact(h: &DMatrix<f64>, psi0: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let dim = psi0.len();
    // coefficients in the eigenbasis
    let mut coef = vec![Complex64::new(0.0, 0.0); dim];
    for (m, c) in coef.iter_mut().enumerate() {
        let col = eig.eigenvectors.column(m);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            acc += col[i] * psi0[i];
        }
        *c = acc * Complex64::new(0.0, -eig.eigenvalues[m] * t).exp();
    }
    DVector::from_fn(dim, |i, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..dim {
            acc += eig.eigenvectors[(i, m)] * coef[m];
        }
        acc
    })
}

// ---- model Hamiltonian builders (periodic chains) ----

/// Extended XY chain: -(1-eps) sum sigma^z - sum [Jxx XX + Jyy YY +
/// Jxzx XZX + Jyzy YZY]; returns (H0, H1) with H(t) = H0 + eps(t) H1.
pub fn xy_hamiltonian(n: usize, a: f64, b: f64, gamma: f64, delta: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let jxx = a * (1.0 + gamma) / 2.0;
    let jyy = a * (1.0 - gamma) / 2.0;
    let jxzx = b * (1.0 + delta) / 2.0;
    let jyzy = b * (1.0 - delta) / 2.0;
    let mut terms = Vec::new();
    let mut h1_terms = Vec::new();
    for i in 0..n {
        let i1 = (i + 1) % n;
        let i2 = (i + 2) % n;
        terms.push(Term { coeff: -1.0, ops: vec![(i, Pauli::Z)] });
        h1_terms.push(Term { coeff: 1.0, ops: vec![(i, Pauli::Z)] });
        terms.push(Term { coeff: -jxx, ops: vec![(i, Pauli::X), (i1, Pauli::X)] });
        if jyy != 0.0 {
            terms.push(Term { coeff: -jyy, ops: vec![(i, Pauli::Y), (i1, Pauli::Y)] });
        }
        if jxzx != 0.0 {
            terms.push(Term { coeff: -jxzx, ops: vec![(i, Pauli::X), (i1, Pauli::Z), (i2, Pauli::X)] });
        }
        if jyzy != 0.0 {
            terms.push(Term { coeff: -jyzy, ops: vec![(i, Pauli::Y), (i1, Pauli::Z), (i2, Pauli::Y)] });
        }
    }
    (build_hamiltonian(n, &terms), build_hamiltonian(n, &h1_terms))
}

/// Random Ising chain: -sum (h_i - eps) sigma^z - sum J_i XX.
pub fn rim_hamiltonian(n: usize, hs: &[f64], js: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut terms = Vec::new();
    let mut h1_terms = Vec::new();
    for i in 0..n {
        terms.push(Term { coeff: -hs[i], ops: vec![(i, Pauli::Z)] });
        h1_terms.push(Term { coeff: 1.0, ops: vec![(i, Pauli::Z)] });
        terms.push(Term { coeff: -js[i], ops: vec![(i, Pauli::X), ((i + 1) % n, Pauli::X)] });
    }
    (build_hamiltonian(n, &terms), build_hamiltonian(n, &h1_terms))
}

/// Long-range chain with string couplings J_r = r^-alpha / zeta(alpha),
/// all ranges r = 1..N-1, periodic.
pub fn longrange_hamiltonian(n: usize, alpha: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let zeta = kzh_core::specfun::riemann_zeta(alpha).unwrap();
    let mut terms = Vec::new();
    let mut h1_terms = Vec::new();
    for i in 0..n {
        terms.push(Term { coeff: -1.0, ops: vec![(i, Pauli::Z)] });
        h1_terms.push(Term { coeff: 1.0, ops: vec![(i, Pauli::Z)] });
        for r in 1..n {
            let jr = (r as f64).powf(-alpha) / zeta;
            let mut ops = vec![(i, Pauli::X)];
            for m in 1..r {
                ops.push(((i + m) % n, Pauli::Z));
            }
            ops.push(((i + r) % n, Pauli::X));
            terms.push(Term { coeff: -jr, ops });
        }
    }
    (build_hamiltonian(n, &terms), build_hamiltonian(n, &h1_terms))
}

/// Finite-chain Fourier transform of the long-range couplings,
/// J~_k = sum_{r=1}^{N-1} J_r e^{ikr} (the exact dispersion of the ring).
pub fn finite_j_tilde(n: usize, alpha: f64, k: f64) -> Complex64 {
    let zeta = kzh_core::specfun::riemann_zeta(alpha).unwrap();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 1..n {
        acc += Complex64::new(0.0, k * r as f64).exp() * (r as f64).powf(-alpha) / zeta;
    }
    acc
}
