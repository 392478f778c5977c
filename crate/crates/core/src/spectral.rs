//! Perron roots of `A = 2E - M` and divergence certificates.
//!
//! A connected graph is admissible exactly when the Perron root of its
//! nonnegative matrix `A` is below 2. When the root is at least 2, the Perron
//! vector `ν` pairs with positions to give a quantity `νᵀλ` that never
//! decreases under firing, so a positive pairing proves that no game touching
//! the component can end.

use serde::Serialize;

use crate::engine::Position;
use crate::graph::{AmplitudeGraph, Kind};
use crate::linalg::leading_pivots;
use crate::scalar::{Mode, Scalar};

/// Dead band around 2 for the floating trichotomy.
pub const EPS_SPEC: f64 = 1e-8;
/// Power-iteration tolerance on the Collatz–Wielandt bracket.
pub const EPS_EIG: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Trichotomy {
    SubCritical,
    Critical,
    SuperCritical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub rho: f64,
    /// Perron vector, max entry 1.
    pub nu: Vec<f64>,
    pub trichotomy: Trichotomy,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceCertificate {
    pub component: Vec<usize>,
    pub nu: Vec<f64>,
    pub rho: f64,
    pub pairing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleShift {
    /// `(-1)^n · M_12·M_23 ⋯ M_n1`.
    pub pi: f64,
    /// `2 - Π - 1/Π`.
    pub shift: f64,
    /// Exact values for integer graphs.
    #[serde(skip)]
    pub exact: Option<(Scalar, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("graph is not connected; decompose it first")]
    NotConnected,
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("graph is not a cycle numbered consecutively")]
    NotACycle,
}

/// `A = 2E - M`.
pub fn firing_matrix(g: &AmplitudeGraph) -> Vec<Vec<f64>> {
    let mut a = g.to_f64_matrix();
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if i == j { 0.0 } else { -*v };
        }
    }
    a
}

/// Perron root and vector of an irreducible nonnegative matrix, by power
/// iteration on `A + I` from the all-ones vector. Stops when the
/// Collatz–Wielandt bracket `[min, max]` of `((A+I)x)_i / x_i` is narrower
/// than `eps`, which bounds the residual `‖Ax - ρx‖_∞` by `eps` as well.
pub fn perron_of_matrix(a: &[Vec<f64>], eps: f64) -> Result<(f64, Vec<f64>, usize), SpectralError> {
    let n = a.len();
    if n == 1 {
        return Ok((a[0][0], vec![1.0], 0));
    }
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    for it in 1..=MAX_ITERATIONS {
        for i in 0..n {
            y[i] = x[i] + a[i].iter().zip(&x).map(|(p, q)| p * q).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(SpectralError::NoConvergence(it));
        }
        if hi - lo < eps {
            let m = x.iter().cloned().fold(0.0, f64::max);
            let nu = x.iter().map(|v| v / m).collect();
            return Ok(((lo + hi) / 2.0 - 1.0, nu, it));
        }
        let m = y.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            x[i] = y[i] / m;
        }
    }
    Err(SpectralError::NoConvergence(MAX_ITERATIONS))
}

/// Exact trichotomy for a connected integer graph via the M-matrix test on
/// `M = 2E - A`: all leading principal minors positive iff `ρ < 2`; all but
/// the last positive and the determinant zero iff `ρ = 2`.
fn exact_trichotomy(g: &AmplitudeGraph) -> Trichotomy {
    let n = g.n();
    let p = leading_pivots(g.amplitudes());
    if p.len() == n && p.iter().all(Scalar::is_positive) {
        Trichotomy::SubCritical
    } else if p.len() == n && p[n - 1].is_zero() {
        Trichotomy::Critical
    } else {
        Trichotomy::SuperCritical
    }
}

fn band(rho: f64) -> Trichotomy {
    if rho < 2.0 - EPS_SPEC {
        Trichotomy::SubCritical
    } else if rho > 2.0 + EPS_SPEC {
        Trichotomy::SuperCritical
    } else {
        Trichotomy::Critical
    }
}

/// Spectral report of a connected graph. For integer graphs the trichotomy
/// is decided exactly; `rho` is still the floating estimate.
pub fn perron(g: &AmplitudeGraph) -> Result<SpectralReport, SpectralError> {
    if !g.is_connected() {
        return Err(SpectralError::NotConnected);
    }
    let (rho, nu, iterations) = perron_of_matrix(&firing_matrix(g), EPS_EIG)?;
    let trichotomy = match g.kind() {
        Kind::Gcm => exact_trichotomy(g),
        Kind::Egcm => band(rho),
    };
    Ok(SpectralReport { rho, nu, trichotomy, iterations })
}

/// Trichotomy of every connected component, in component order.
pub fn trichotomy(g: &AmplitudeGraph) -> Vec<(Vec<usize>, Trichotomy)> {
    g.connected_components()
        .into_iter()
        .map(|c| {
            let sub = g.induced_subgraph(&c).expect("components are nonempty");
            let t = match g.kind() {
                Kind::Gcm => exact_trichotomy(&sub),
                Kind::Egcm => match perron(&sub) {
                    Ok(r) => r.trichotomy,
                    // A root estimate that never settles is not below 2.
                    Err(_) => Trichotomy::SuperCritical,
                },
            };
            (c, t)
        })
        .collect()
}

/// Finds a component with `ρ ≥ 2` whose Perron vector pairs positively with
/// `λ`. Pairings within rounding of zero are not accepted.
pub fn certify_divergence(g: &AmplitudeGraph, lambda: &Position) -> Option<DivergenceCertificate> {
    for comp in g.connected_components() {
        let sub = g.induced_subgraph(&comp).expect("components are nonempty");
        if sub.kind() == Kind::Gcm && exact_trichotomy(&sub) == Trichotomy::SubCritical {
            continue;
        }
        let Ok(report) = perron(&sub) else { continue };
        if report.trichotomy == Trichotomy::SubCritical {
            continue;
        }
        let terms: Vec<f64> = comp
            .iter()
            .zip(&report.nu)
            .map(|(&i, v)| v * lambda.values()[i].to_f64())
            .collect();
        let pairing: f64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        if pairing.is_finite() && pairing > 1e-9 * scale {
            return Some(DivergenceCertificate {
                component: comp,
                nu: report.nu,
                rho: report.rho,
                pairing,
            });
        }
    }
    None
}

/// `Π` and the characteristic-polynomial shift `2 - Π - 1/Π` of a cycle whose
/// nodes are numbered consecutively around it.
pub fn cycle_charpoly_shift(g: &AmplitudeGraph) -> Result<CycleShift, SpectralError> {
    let n = g.n();
    if n < 3 || g.edges().len() != n || (0..n).any(|i| !g.is_adjacent(i, (i + 1) % n)) {
        return Err(SpectralError::NotACycle);
    }
    let mode = g.mode();
    let sign = Scalar::from_int(mode, if n % 2 == 0 { 1 } else { -1 });
    let pi = (0..n).fold(sign, |acc, i| &acc * g.amplitude(i, (i + 1) % n));
    let two = Scalar::from_int(mode, 2);
    let shift = &(&two - &pi) - &(&Scalar::one(mode) / &pi);
    let exact = (mode == Mode::Exact).then(|| (pi.clone(), shift.clone()));
    Ok(CycleShift { pi: pi.to_f64(), shift: shift.to_f64(), exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogId;

    #[test]
    fn firing_matrix_examples() {
        let g = CatalogId::AffA(1).build().unwrap();
        assert_eq!(firing_matrix(&g), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        let g2 = CatalogId::G2.build().unwrap();
        let a = firing_matrix(&g2);
        assert_eq!(a[0][0], 0.0);
        assert_eq!(a[0][1] * a[1][0], 3.0);
    }

    #[test]
    fn a2_root_is_one() {
        let r = perron(&CatalogId::A(2).build().unwrap()).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert_eq!(r.trichotomy, Trichotomy::SubCritical);
    }

    #[test]
    fn one_node() {
        let r = perron(&CatalogId::A(1).build().unwrap()).unwrap();
        assert_eq!((r.rho, r.nu.clone(), r.iterations), (0.0, vec![1.0], 0));
    }

    #[test]
    fn aff_a1_critical_with_certificate() {
        let g = CatalogId::CalAffA(1).build().unwrap();
        let r = perron(&g).unwrap();
        assert!((r.rho - 2.0).abs() < 1e-12);
        assert_eq!(r.nu, vec![1.0, 1.0]);
        assert_eq!(r.trichotomy, Trichotomy::Critical);
        let lam = Position::from_f64(&[1.0, 0.0]);
        let c = certify_divergence(&g, &lam).unwrap();
        assert!((c.pairing - 1.0).abs() < 1e-12);
        assert!(certify_divergence(&g, &Position::from_f64(&[0.0, 0.0])).is_none());
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = AmplitudeGraph::gcm(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(perron(&g), Err(SpectralError::NotConnected));
        assert_eq!(trichotomy(&g).len(), 2);
    }

    #[test]
    fn cycle_shift_examples() {
        let c3 = CatalogId::AffA(2).build().unwrap();
        let s = cycle_charpoly_shift(&c3).unwrap();
        assert_eq!((s.pi, s.shift), (1.0, 0.0));
        let g = AmplitudeGraph::gcm(&[vec![2, -2, -1], vec![-1, 2, -1], vec![-1, -1, 2]]).unwrap();
        let s = cycle_charpoly_shift(&g).unwrap();
        assert_eq!(s.exact.unwrap(), (Scalar::from_int(Mode::Exact, 2), Scalar::ratio(-1, 2)));
        assert_eq!(
            cycle_charpoly_shift(&CatalogId::A(3).build().unwrap()),
            Err(SpectralError::NotACycle)
        );
    }

    #[test]
    fn exact_trichotomy_on_integer_families() {
        assert_eq!(exact_trichotomy(&CatalogId::E8.build().unwrap()), Trichotomy::SubCritical);
        assert_eq!(exact_trichotomy(&CatalogId::AffE8.build().unwrap()), Trichotomy::Critical);
        assert_eq!(exact_trichotomy(&CatalogId::AffA(4).build().unwrap()), Trichotomy::Critical);
        let t = AmplitudeGraph::gcm(&[vec![2, -3], vec![-3, 2]]).unwrap();
        assert_eq!(exact_trichotomy(&t), Trichotomy::SuperCritical);
    }
}
