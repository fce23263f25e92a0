//! Classical charged particle on the half-plane: Hamilton's equations,
//! RK4 integration, conserved charges and circle fitting of orbits.
//!
//! The Hamiltonian is `H = (1/4a²)[y²(p_x² + p_y²) + 2βy p_x + β²]`.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("state outside the half-plane: y = {0}")]
    Domain(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("circle fit is singular (points collinear or coincident)")]
    FitSingular,
}

type Result<T> = std::result::Result<T, ClassicalError>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

impl PhaseState {
    pub fn new(x: f64, y: f64, px: f64, py: f64) -> Self {
        Self { t: 0.0, x, y, px, py }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.t, self.x, self.y, self.px, self.py].iter().all(|v| v.is_finite()) {
            return Err(ClassicalError::Invalid("non-finite phase-space coordinate".into()));
        }
        if self.y <= 0.0 {
            return Err(ClassicalError::Domain(self.y));
        }
        Ok(())
    }

    fn shifted(&self, k: &[f64; 4], f: f64, dt: f64) -> Self {
        Self {
            t: self.t + f * dt,
            x: self.x + f * dt * k[0],
            y: self.y + f * dt * k[1],
            px: self.px + f * dt * k[2],
            py: self.py + f * dt * k[3],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub a: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub params: Params,
    pub dt: f64,
    pub states: Vec<PhaseState>,
    /// Set when a step would have left `y > 0`; `states` ends at the last
    /// valid state.
    pub domain_exit: bool,
}

/// `(ẋ, ẏ, ṗ_x, ṗ_y)`.
pub fn hamilton_rhs(s: &PhaseState, p: Params) -> Result<[f64; 4]> {
    if !(s.y > 0.0) {
        return Err(ClassicalError::Domain(s.y));
    }
    let k = 1.0 / (2.0 * p.a * p.a);
    Ok([
        k * (s.y * s.y * s.px + p.beta * s.y),
        k * s.y * s.y * s.py,
        0.0,
        -k * (s.y * (s.px * s.px + s.py * s.py) + p.beta * s.px),
    ])
}

fn rk4_step(s: &PhaseState, p: Params, dt: f64) -> Result<PhaseState> {
    let k1 = hamilton_rhs(s, p)?;
    let k2 = hamilton_rhs(&s.shifted(&k1, 0.5, dt), p)?;
    let k3 = hamilton_rhs(&s.shifted(&k2, 0.5, dt), p)?;
    let k4 = hamilton_rhs(&s.shifted(&k3, 1.0, dt), p)?;
    let comb: [f64; 4] = std::array::from_fn(|i| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0);
    let mut next = s.shifted(&comb, 1.0, dt);
    next.t = s.t + dt;
    Ok(next)
}

/// Classic fourth-order Runge–Kutta with uniform step `dt`.
pub fn integrate_rk4(s0: PhaseState, p: Params, dt: f64, steps: usize) -> Result<Trajectory> {
    s0.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ClassicalError::Invalid(format!("dt must be positive, got {dt}")));
    }
    if !(p.a > 0.0) {
        return Err(ClassicalError::Invalid(format!("a must be positive, got {}", p.a)));
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(s0);
    let mut domain_exit = false;
    for i in 0..steps {
        let cur = &states[i];
        match rk4_step(cur, p, dt) {
            Ok(mut next) if next.y > 0.0 && next.validate().is_ok() => {
                next.t = s0.t + (i + 1) as f64 * dt;
                states.push(next);
            }
            _ => {
                domain_exit = true;
                break;
            }
        }
    }
    Ok(Trajectory {
        params: p,
        dt,
        states,
        domain_exit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Conserved {
    pub h: f64,
    pub l1: f64,
    /// `L2 = p_x`, the charge that closes the bracket algebra.
    pub l2_px: f64,
    /// `L2 = p_y`, which does not close the algebra; kept for comparison.
    pub l2_py: f64,
    pub l3: f64,
}

pub fn conserved_values(s: &PhaseState, p: Params) -> Conserved {
    let (x, y, px, py) = (s.x, s.y, s.px, s.py);
    Conserved {
        h: (y * y * (px * px + py * py) + 2.0 * p.beta * y * px + p.beta * p.beta) / (4.0 * p.a * p.a),
        l1: x * px + y * py,
        l2_px: px,
        l2_py: py,
        l3: (y * y - x * x) * px - 2.0 * x * y * py + 2.0 * p.beta * y,
    }
}

/// Largest relative deviation from the initial value of each conserved
/// quantity along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Drift {
    pub h: f64,
    pub l1: f64,
    pub l2_px: f64,
    pub l2_py: f64,
    pub l3: f64,
}

impl Drift {
    /// Worst drift over `H` and the charges that close the algebra.
    pub fn worst_closing(&self) -> f64 {
        self.h.max(self.l1).max(self.l2_px).max(self.l3)
    }
}

pub fn drift(traj: &Trajectory) -> Drift {
    let c0 = conserved_values(&traj.states[0], traj.params);
    let rel = |v: f64, v0: f64| {
        if v0 == 0.0 {
            v.abs()
        } else {
            ((v - v0) / v0).abs()
        }
    };
    let mut d = Drift {
        h: 0.0,
        l1: 0.0,
        l2_px: 0.0,
        l2_py: 0.0,
        l3: 0.0,
    };
    for s in &traj.states {
        let c = conserved_values(s, traj.params);
        d.h = d.h.max(rel(c.h, c0.h));
        d.l1 = d.l1.max(rel(c.l1, c0.l1));
        d.l2_px = d.l2_px.max(rel(c.l2_px, c0.l2_px));
        d.l2_py = d.l2_py.max(rel(c.l2_py, c0.l2_py));
        d.l3 = d.l3.max(rel(c.l3, c0.l3));
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleFit {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    /// RMS of `|p − c| − r` over the samples.
    pub rms: f64,
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let scale: f64 = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if !(d.abs() > 1e-12 * scale.powi(3)) {
        return None;
    }
    Some(std::array::from_fn(|c| {
        let mut mc = m;
        for r in 0..3 {
            mc[r][c] = b[r];
        }
        det(&mc) / d
    }))
}

/// Algebraic (Kåsa) least-squares circle: minimizes
/// `Σ(x² + y² + Dx + Ey + F)²` over `(D, E, F)`.
pub fn circle_fit(points: &[(f64, f64)]) -> Result<CircleFit> {
    let mut distinct: Vec<(f64, f64)> = points.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    distinct.dedup();
    if distinct.len() < 10 {
        return Err(ClassicalError::Invalid(format!(
            "circle fit needs at least 10 distinct points, got {}",
            distinct.len()
        )));
    }
    // Centre the data for conditioning.
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(x, y) in points {
        let (u, v) = (x - mx, y - my);
        let row = [u, v, 1.0];
        let rhs = -(u * u + v * v);
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
    }
    let [d, e, f] = solve3(ata, atb).ok_or(ClassicalError::FitSingular)?;
    let (cu, cv) = (-d / 2.0, -e / 2.0);
    let r2 = cu * cu + cv * cv - f;
    if !(r2 > 0.0) {
        return Err(ClassicalError::FitSingular);
    }
    let r = r2.sqrt();
    let rms = (points
        .iter()
        .map(|&(x, y)| ((x - mx - cu).hypot(y - my - cv) - r).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(CircleFit {
        cx: cu + mx,
        cy: cv + my,
        r,
        rms,
    })
}

impl Trajectory {
    pub fn positions(&self) -> Vec<(f64, f64)> {
        self.states.iter().map(|s| (s.x, s.y)).collect()
    }

    /// CSV with header `t,x,y,px,py,H,L1,L2,L3`, 17 significant digits;
    /// the `L2` column is the closing charge `p_x`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,px,py,H,L1,L2,L3\n");
        for s in &self.states {
            let c = conserved_values(s, self.params);
            let row = [s.t, s.x, s.y, s.px, s.py, c.h, c.l1, c.l2_px, c.l3];
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Period of a bounded orbit: time between successive minima of `y`
/// (sign changes of `p_y` from negative to positive), located by linear
/// interpolation on a fine RK4 run.
pub fn orbit_period(s0: PhaseState, p: Params, dt: f64, max_steps: usize) -> Result<f64> {
    let traj = integrate_rk4(s0, p, dt, max_steps)?;
    let mut crossings = Vec::new();
    for w in traj.states.windows(2) {
        if w[0].py < 0.0 && w[1].py >= 0.0 {
            let frac = w[0].py / (w[0].py - w[1].py);
            crossings.push(w[0].t + frac * dt);
            if crossings.len() == 2 {
                return Ok(crossings[1] - crossings[0]);
            }
        }
    }
    Err(ClassicalError::Invalid(
        "no closed orbit detected within the step budget".into(),
    ))
}

/// The reference bounded orbit: `β = 4`, `a = 1`, starting at the lowest
/// point `(0.3, 1)` with `p_x = −3`, `p_y = 0`, so `y` oscillates in `[1, 5/3]`.
pub fn bounded_preset() -> (PhaseState, Params) {
    (PhaseState::new(0.3, 1.0, -3.0, 0.0), Params { a: 1.0, beta: 4.0 })
}

/// One rung of a step-size ladder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderRung {
    pub dt: f64,
    pub drift: Drift,
    pub circle: CircleFit,
}

/// Integrates over `duration` with each step size and records drift and the
/// circle fit.
pub fn dt_ladder(s0: PhaseState, p: Params, duration: f64, dts: &[f64]) -> Result<Vec<LadderRung>> {
    dts.iter()
        .map(|&dt| {
            let steps = (duration / dt).round() as usize;
            let traj = integrate_rk4(s0, p, dt, steps)?;
            if traj.domain_exit {
                return Err(ClassicalError::Domain(traj.states.last().map_or(0.0, |s| s.y)));
            }
            Ok(LadderRung {
                dt,
                drift: drift(&traj),
                circle: circle_fit(&traj.positions())?,
            })
        })
        .collect()
}

/// Largest phase-space deviation (max-norm over `x, y, p_x, p_y`) of a
/// trajectory from a finer reference run over the same time span, compared
/// at the coarse time steps. `coarse.dt` must be an integer multiple of
/// `reference.dt`.
pub fn max_state_error(coarse: &Trajectory, reference: &Trajectory) -> Result<f64> {
    let ratio = coarse.dt / reference.dt;
    let r = ratio.round() as usize;
    if r == 0 || (ratio - r as f64).abs() > 1e-9 * ratio {
        return Err(ClassicalError::Invalid(format!(
            "step {} is not a multiple of the reference step {}",
            coarse.dt, reference.dt
        )));
    }
    let mut worst = 0.0f64;
    for (i, s) in coarse.states.iter().enumerate() {
        let Some(q) = reference.states.get(i * r) else {
            break;
        };
        let d = (s.x - q.x)
            .abs()
            .max((s.y - q.y).abs())
            .max((s.px - q.px).abs())
            .max((s.py - q.py).abs());
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Global error of each step size in `dts` against a reference run with
/// step `min(dts) / refine`.
pub fn global_error_ladder(s0: PhaseState, p: Params, duration: f64, dts: &[f64], refine: usize) -> Result<Vec<f64>> {
    let finest = dts.iter().copied().fold(f64::INFINITY, f64::min);
    let dt_ref = finest / refine as f64;
    let reference = integrate_rk4(s0, p, dt_ref, (duration / dt_ref).round() as usize)?;
    dts.iter()
        .map(|&dt| {
            let traj = integrate_rk4(s0, p, dt, (duration / dt).round() as usize)?;
            max_state_error(&traj, &reference)
        })
        .collect()
}

/// Least-squares slope of `log(err)` against `log(dt)`.
pub fn convergence_exponent(dts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Halves `dt` from `period / 25` until the closing drift over `periods`
/// orbits is at most `tol`.
pub fn select_dt(s0: PhaseState, p: Params, period: f64, periods: f64, tol: f64) -> Result<LadderRung> {
    let mut dt = period / 25.0;
    for _ in 0..20 {
        let rung = dt_ladder(s0, p, periods * period, &[dt])?[0];
        if rung.drift.worst_closing() <= tol {
            return Ok(rung);
        }
        dt /= 2.0;
    }
    Err(ClassicalError::Invalid(format!("no step size reached drift {tol:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const P: Params = Params { a: 1.0, beta: 2.0 };

    #[test]
    fn rhs_examples() {
        let s = PhaseState::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(hamilton_rhs(&s, P).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        let rest = hamilton_rhs(&s, Params { a: 1.0, beta: 0.0 }).unwrap();
        assert!(rest.iter().all(|v| *v == 0.0));
        assert_eq!(hamilton_rhs(&PhaseState::new(1.0, 0.7, 2.0, -1.0), P).unwrap()[2], 0.0);
        assert!(hamilton_rhs(&PhaseState::new(0.0, 0.0, 1.0, 1.0), P).is_err());
    }

    #[test]
    fn rhs_is_gradient_of_hamiltonian() {
        let s = PhaseState::new(0.4, 1.3, -0.7, 0.9);
        let f = hamilton_rhs(&s, P).unwrap();
        let h = |s: PhaseState| conserved_values(&s, P).h;
        let e = 1e-6;
        let d = |dx: f64, dy: f64, dpx: f64, dpy: f64| {
            let plus = PhaseState::new(s.x + dx, s.y + dy, s.px + dpx, s.py + dpy);
            let minus = PhaseState::new(s.x - dx, s.y - dy, s.px - dpx, s.py - dpy);
            (h(plus) - h(minus)) / (2.0 * e)
        };
        assert_relative_eq!(f[0], d(0.0, 0.0, e, 0.0), max_relative = 1e-8);
        assert_relative_eq!(f[1], d(0.0, 0.0, 0.0, e), max_relative = 1e-8);
        assert_relative_eq!(f[2], -d(e, 0.0, 0.0, 0.0), epsilon = 1e-8);
        assert_relative_eq!(f[3], -d(0.0, e, 0.0, 0.0), max_relative = 1e-8);
    }

    #[test]
    fn conserved_examples() {
        let c = conserved_values(&PhaseState::new(0.0, 1.0, 0.0, 0.0), P);
        assert_eq!(c.h, 1.0);
        assert_eq!(c.l3, 4.0);
        assert_eq!(conserved_values(&PhaseState::new(0.0, 2.0, 5.0, 0.0), P).l1, 0.0);
    }

    #[test]
    fn rest_stays_at_rest() {
        let s0 = PhaseState::new(0.5, 2.0, 0.0, 0.0);
        let t = integrate_rk4(s0, Params { a: 1.0, beta: 0.0 }, 0.1, 20).unwrap();
        assert_eq!(t.states.len(), 21);
        assert!(t.states.iter().all(|s| (s.x, s.y, s.px, s.py) == (0.5, 2.0, 0.0, 0.0)));
        let single = integrate_rk4(s0, P, 0.1, 0).unwrap();
        assert_eq!(single.states.len(), 1);
    }

    #[test]
    fn geodesic_energy_drift() {
        let s0 = PhaseState::new(0.0, 1.0, 0.4, 0.3);
        let t = integrate_rk4(s0, Params { a: 1.0, beta: 0.0 }, 1e-3, 10_000).unwrap();
        assert!(!t.domain_exit);
        assert!(drift(&t).h <= 1e-10, "{:?}", drift(&t));
    }

    #[test]
    fn domain_exit_is_flagged() {
        // Falling geodesic with no field heads to y = 0 only asymptotically;
        // a strong downward kick with a huge step overshoots it.
        let s0 = PhaseState::new(0.0, 1.0, 0.0, -50.0);
        let t = integrate_rk4(s0, Params { a: 1.0, beta: 0.0 }, 1.0, 10).unwrap();
        assert!(t.domain_exit);
        assert!(t.states.iter().all(|s| s.y > 0.0));
    }

    #[test]
    fn circle_fit_examples() {
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|k| {
                let th = k as f64 * 0.157;
                (1.5 + 2.0 * th.cos(), -0.5 + 2.0 * th.sin())
            })
            .collect();
        let c = circle_fit(&pts).unwrap();
        assert_relative_eq!(c.cx, 1.5, epsilon = 1e-12);
        assert_relative_eq!(c.cy, -0.5, epsilon = 1e-12);
        assert_relative_eq!(c.r, 2.0, epsilon = 1e-12);
        assert!(c.rms < 1e-12);
        let line: Vec<(f64, f64)> = (0..20).map(|k| (k as f64, 2.0 * k as f64 + 1.0)).collect();
        assert_eq!(circle_fit(&line), Err(ClassicalError::FitSingular));
    }

    #[test]
    fn preset_orbit_is_bounded() {
        let (s0, p) = bounded_preset();
        let period = orbit_period(s0, p, 1e-3, 100_000).unwrap();
        let t = integrate_rk4(s0, p, 1e-3, (period / 1e-3) as usize).unwrap();
        let ys: Vec<f64> = t.states.iter().map(|s| s.y).collect();
        let (lo, hi) = ys.iter().fold((f64::MAX, f64::MIN), |(l, h), y| (l.min(*y), h.max(*y)));
        assert_relative_eq!(lo, 1.0, epsilon = 1e-9);
        assert_relative_eq!(hi, 5.0 / 3.0, epsilon = 1e-6);
    }
}
