//! Right-hand side of the amplitude equations and the classical RK4 stepper.

use num_complex::Complex64;

use crate::error::{DwmError, Result};
use crate::lattice::{LatticeModel, PotentialSpec, WellShape};
use crate::state::WaveState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// dc_n/dt = −i[−(c_{n+1} + c_{n−1}) + 𝒱(n + v·t)c_n] − Γ_n c_n, with
/// c_{±(M+1)} = 0; the time is taken from `state.t`.
pub fn rhs(
    state: &WaveState,
    spec: &PotentialSpec,
    model: &LatticeModel,
) -> Result<Vec<Complex64>> {
    check_len(state, model)?;
    let mut pot = vec![0.0; model.sites()];
    spec.fill(model, state.t, &mut pot)?;
    let gamma = model.absorption_rates();
    let mut out = vec![Complex64::new(0.0, 0.0); model.sites()];
    derivative(state.amplitudes(), &pot, &gamma, 0.0, &mut out);
    Ok(out)
}

/// One classical RK4 step of size `dt` (negative steps run backward).
pub fn rk4_step(
    state: &WaveState,
    spec: &PotentialSpec,
    model: &LatticeModel,
    dt: f64,
) -> Result<WaveState> {
    check_len(state, model)?;
    let mut prop = Propagator::new(spec, model, 0.0)?;
    let mut c = state.amplitudes().to_vec();
    prop.step(&mut c, state.t, dt)?;
    WaveState::new(c, state.t + dt)
}

/// One RK4 step for a bare chain of any length with a static diagonal;
/// no lattice-size restrictions apply.
pub fn rk4_step_chain(amplitudes: &[Complex64], diag: &[f64], dt: f64) -> Result<Vec<Complex64>> {
    if amplitudes.len() != diag.len() {
        return Err(DwmError::LengthMismatch {
            expected: diag.len(),
            got: amplitudes.len(),
        });
    }
    let n = diag.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut k: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![zero; n]);
    let mut tmp = vec![zero; n];
    let mut c = amplitudes.to_vec();
    let gamma = vec![0.0; n];
    rk4_kernel(
        &mut c,
        [diag, diag, diag],
        &gamma,
        0.0,
        dt,
        &mut k,
        &mut tmp,
    );
    Ok(c)
}

#[allow(clippy::too_many_arguments)]
fn rk4_kernel(
    c: &mut [Complex64],
    [p0, p1, p2]: [&[f64]; 3],
    gamma: &[f64],
    offset: f64,
    dt: f64,
    k: &mut [Vec<Complex64>; 4],
    tmp: &mut [Complex64],
) {
    let [k1, k2, k3, k4] = k;
    let half = 0.5 * dt;
    derivative(c, p0, gamma, offset, k1);
    for i in 0..c.len() {
        tmp[i] = c[i] + half * k1[i];
    }
    derivative(tmp, p1, gamma, offset, k2);
    for i in 0..c.len() {
        tmp[i] = c[i] + half * k2[i];
    }
    derivative(tmp, p1, gamma, offset, k3);
    for i in 0..c.len() {
        tmp[i] = c[i] + dt * k3[i];
    }
    derivative(tmp, p2, gamma, offset, k4);
    let sixth = dt / 6.0;
    for i in 0..c.len() {
        c[i] += sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
}

fn check_len(state: &WaveState, model: &LatticeModel) -> Result<()> {
    if state.len() != model.sites() {
        return Err(DwmError::LengthMismatch {
            expected: model.sites(),
            got: state.len(),
        });
    }
    Ok(())
}

fn derivative(c: &[Complex64], pot: &[f64], gamma: &[f64], offset: f64, out: &mut [Complex64]) {
    let n = c.len();
    for i in 0..n {
        let left = if i > 0 {
            c[i - 1]
        } else {
            Complex64::new(0.0, 0.0)
        };
        let right = if i + 1 < n {
            c[i + 1]
        } else {
            Complex64::new(0.0, 0.0)
        };
        let h_c = (pot[i] - offset) * c[i] - left - right;
        out[i] = -I * h_c - gamma[i] * c[i];
    }
}

/// Reusable RK4 workspace for one lattice and one well.
///
/// `offset` is subtracted from the diagonal, i.e. the stepper advances
/// c·e^{i·offset·t}; callers undo the phase.
pub(crate) struct Propagator<'a> {
    spec: &'a PotentialSpec,
    model: &'a LatticeModel,
    offset: f64,
    gamma: Vec<f64>,
    is_static: bool,
    pot_start: Vec<f64>,
    pot_mid: Vec<f64>,
    pot_end: Vec<f64>,
    /// Time at which `pot_end` was last filled.
    end_time: Option<f64>,
    k: [Vec<Complex64>; 4],
    tmp: Vec<Complex64>,
}

impl<'a> Propagator<'a> {
    pub(crate) fn new(
        spec: &'a PotentialSpec,
        model: &'a LatticeModel,
        offset: f64,
    ) -> Result<Self> {
        spec.validate()?;
        let n = model.sites();
        let zero = Complex64::new(0.0, 0.0);
        let is_static = spec.drift_v == 0.0 || matches!(spec.shape, WellShape::Flat);
        let mut prop = Self {
            spec,
            model,
            offset,
            gamma: model.absorption_rates(),
            is_static,
            pot_start: vec![0.0; n],
            pot_mid: vec![0.0; n],
            pot_end: vec![0.0; n],
            end_time: None,
            k: std::array::from_fn(|_| vec![zero; n]),
            tmp: vec![zero; n],
        };
        if is_static {
            spec.fill(model, 0.0, &mut prop.pot_start)?;
        }
        Ok(prop)
    }

    pub(crate) fn step(&mut self, c: &mut [Complex64], t: f64, dt: f64) -> Result<()> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(DwmError::InvalidParameter(format!(
                "time step must be finite and nonzero, got {dt}"
            )));
        }
        let (p0, p1, p2): (&[f64], &[f64], &[f64]) = if self.is_static {
            (&self.pot_start, &self.pot_start, &self.pot_start)
        } else {
            if self.end_time == Some(t) {
                std::mem::swap(&mut self.pot_start, &mut self.pot_end);
            } else {
                self.spec.fill(self.model, t, &mut self.pot_start)?;
            }
            self.spec
                .fill(self.model, t + 0.5 * dt, &mut self.pot_mid)?;
            self.spec.fill(self.model, t + dt, &mut self.pot_end)?;
            self.end_time = Some(t + dt);
            (&self.pot_start, &self.pot_mid, &self.pot_end)
        };

        rk4_kernel(
            c,
            [p0, p1, p2],
            &self.gamma,
            self.offset,
            dt,
            &mut self.k,
            &mut self.tmp,
        );
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{inner_product, norm_sq};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn uniform_state_on_free_chain() {
        let model = LatticeModel::open(4).unwrap();
        let s = WaveState::from_fn(4, 0.0, |_| c(1.0, 0.0));
        let d = rhs(&s, &PotentialSpec::free(), &model).unwrap();
        assert_eq!(d[0], c(0.0, 1.0));
        assert_eq!(d[8], c(0.0, 1.0));
        for v in &d[1..8] {
            assert_eq!(*v, c(0.0, 2.0));
        }
    }

    #[test]
    fn single_site_feeds_neighbours() {
        let model = LatticeModel::open(3).unwrap();
        let d = rhs(&WaveState::delta(3, 0), &PotentialSpec::free(), &model).unwrap();
        assert_eq!(d[2], c(0.0, 1.0));
        assert_eq!(d[4], c(0.0, 1.0));
        assert_eq!(d[3], c(0.0, 0.0));
        assert_eq!(d[0], c(0.0, 0.0));
    }

    #[test]
    fn open_boundary_conserves_norm_to_first_order() {
        let model = LatticeModel::open(15).unwrap();
        let spec = PotentialSpec::poschl_teller(1.3, 3.0).with_drift(0.7);
        let s = WaveState::from_fn(15, 2.0, |n| {
            let x = n as f64;
            Complex64::from_polar((-x * x / 20.0).exp(), 0.3 * x)
        });
        let d = WaveState::new(rhs(&s, &spec, &model).unwrap(), 0.0).unwrap();
        assert!(inner_product(&s, &d).unwrap().re.abs() < 1e-15);
    }

    #[test]
    fn absorbing_edges_drain_norm() {
        let model = LatticeModel::new(
            15,
            crate::lattice::Boundary::Absorbing {
                width: 5,
                strength: 1.0,
            },
        )
        .unwrap();
        let s = WaveState::from_fn(15, 0.0, |_| c(1.0, 0.0));
        let d = WaveState::new(rhs(&s, &PotentialSpec::free(), &model).unwrap(), 0.0).unwrap();
        assert!(inner_product(&s, &d).unwrap().re < 0.0);
    }

    #[test]
    fn constant_potential_only_adds_a_phase() {
        let model = LatticeModel::open(20).unwrap();
        let flat = PotentialSpec::free();
        let lifted = PotentialSpec::tabulated(vec![0.7; 41]);
        let s = WaveState::from_fn(20, 0.0, |n| {
            let x = n as f64;
            Complex64::from_polar((-x * x / 18.0).exp(), 0.4 * x)
        })
        .normalized()
        .unwrap();
        let dt = 0.01;
        let phase = Complex64::from_polar(1.0, -0.7 * dt);
        let mut cur = s;
        for _ in 0..50 {
            let na = rk4_step(&cur, &flat, &model, dt).unwrap();
            let nb = rk4_step(&cur, &lifted, &model, dt).unwrap();
            for (x, y) in na.amplitudes().iter().zip(nb.amplitudes()) {
                assert!((x * phase - y).norm() < 1e-10);
            }
            cur = na;
        }
        assert_relative_eq!(norm_sq(&cur), 1.0, epsilon = 1e-9);
    }

    /// Closed form for the two-site chain started on site 1.
    fn two_site_max_error(dt: f64, t_end: f64) -> f64 {
        let n = (t_end / dt).round() as usize;
        let mut amps = vec![c(1.0, 0.0), c(0.0, 0.0)];
        for _ in 0..n {
            amps = rk4_step_chain(&amps, &[0.0, 0.0], dt).unwrap();
        }
        let exact = [c(t_end.cos(), 0.0), c(0.0, t_end.sin())];
        (amps[0] - exact[0]).norm().max((amps[1] - exact[1]).norm())
    }

    #[test]
    fn two_site_closed_form() {
        assert!(two_site_max_error(0.01, 1.0) < 1e-9);
    }

    #[test]
    fn one_step_error_drops_32x_when_halving() {
        let e1 = two_site_max_error(0.2, 0.2);
        let e2 = two_site_max_error(0.1, 0.1);
        let ratio = e1 / e2;
        assert!((ratio - 32.0).abs() < 2.0, "{ratio}");
    }

    #[test]
    fn zero_step_is_rejected() {
        let model = LatticeModel::open(1).unwrap();
        assert!(rk4_step(&WaveState::delta(1, 0), &PotentialSpec::free(), &model, 0.0).is_err());
        assert!(rk4_step(&WaveState::delta(2, 0), &PotentialSpec::free(), &model, 0.1).is_err());
    }
}
