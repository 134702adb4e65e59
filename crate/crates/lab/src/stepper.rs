//! Exponential and IMEX time stepping for ∂ₜu = Lu + N(u) with L diagonal
//! or 2×2 block diagonal in Fourier space.

use eckhaus_core::Mat2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{field, LabError, Result, SpectralGrid};

type C = Complex64;

/// Fourier coefficients per component.
pub type State = Vec<Vec<C>>;

pub enum LinearOp {
    /// The same scalar symbol on every component.
    Scalar(Vec<C>),
    /// One block per mode coupling components 0 and 1.
    Block(Vec<Mat2>),
}

impl LinearOp {
    fn len(&self) -> usize {
        match self {
            LinearOp::Scalar(v) => v.len(),
            LinearOp::Block(v) => v.len(),
        }
    }

    /// Largest real part of the spectrum.
    pub fn max_growth(&self) -> f64 {
        match self {
            LinearOp::Scalar(v) => v.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max),
            LinearOp::Block(v) => v
                .iter()
                .flat_map(|m| {
                    let (a, b) = eig2(m);
                    [a.re, b.re]
                })
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

pub trait System {
    fn grid(&self) -> &SpectralGrid;
    fn components(&self) -> usize;
    fn linear(&self) -> &LinearOp;
    /// Writes N(u) into `out`. Implementations enforce their own blow-up
    /// guard here, since they already hold the physical fields.
    fn nonlinear(&self, t: f64, u: &[Vec<C>], out: &mut [Vec<C>]) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[serde(rename = "etd-rk4")]
    EtdRk4,
    #[serde(rename = "imex-bdf2")]
    ImexBdf2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    pub t_end: f64,
    pub record_stride: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self { dt: 0.1, scheme: Scheme::EtdRk4, dealias: true, t_end: 1.0, record_stride: 1 }
    }
}

/// φ₀..φ₃ with φ_{j+1}(z) = (φ_j(z) − 1/j!)/z.
pub fn phi_functions(z: C) -> [C; 4] {
    if z.norm() < 0.5 {
        // φ_j(z) = Σ z^m/(m + j)!
        let mut out = [C::new(0.0, 0.0); 4];
        for (j, o) in out.iter_mut().enumerate() {
            let mut term = C::new(1.0 / factorial(j), 0.0);
            let mut sum = term;
            for m in 1..24 {
                term = term * z / (m + j) as f64;
                sum += term;
            }
            *o = sum;
        }
        out
    } else {
        let e = z.exp();
        let p1 = (e - 1.0) / z;
        let p2 = (p1 - 1.0) / z;
        let p3 = (p2 - 0.5) / z;
        [e, p1, p2, p3]
    }
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

/// ETDRK4 weights as functions of z = hλ: [e^z, e^{z/2}, Q, f₁, f₂, f₃]
/// divided by h where appropriate (multiplied back in by the caller).
fn etd_weights(z: C) -> [C; 6] {
    let [e, p1, p2, p3] = phi_functions(z);
    let [e2, q1, _, _] = phi_functions(z * 0.5);
    [e, e2, q1 * 0.5, p1 - p2 * 3.0 + p3 * 4.0, p2 - p3 * 2.0, p3 * 4.0 - p2]
}

/// Eigenvalues of a 2×2 block, the small one computed as det/large.
pub fn eig2(m: &Mat2) -> (C, C) {
    let tr = m.trace();
    let det = m.det();
    let disc = (tr * tr * 0.25 - det).sqrt();
    let half = tr * 0.5;
    let big = if (half.conj() * disc).re >= 0.0 { half + disc } else { half - disc };
    if big.norm() == 0.0 {
        return (big, big);
    }
    (big, det / big)
}

/// f(M) for a 2×2 block via f(M) = f(μ₂)I + f[μ₁, μ₂](M − μ₂I), the divided
/// difference taken by a circular contour when the eigenvalues are close.
fn block_function<const K: usize>(m: &Mat2, f: impl Fn(C) -> [C; K]) -> [Mat2; K] {
    let (m1, m2) = eig2(m);
    let f2 = f(m2);
    let dd: [C; K] = if (m1 - m2).norm() > 0.5 {
        let f1 = f(m1);
        core::array::from_fn(|i| (f1[i] - f2[i]) / (m1 - m2))
    } else {
        let centre = (m1 + m2) * 0.5;
        let npts = 32;
        let mut acc = [C::new(0.0, 0.0); K];
        for j in 0..npts {
            let w = C::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / npts as f64);
            let z = centre + w;
            let fz = f(z);
            let weight = w / ((z - m1) * (z - m2));
            for i in 0..K {
                acc[i] += fz[i] * weight;
            }
        }
        acc.map(|a| a / npts as f64)
    };
    let shifted = *m - Mat2::scalar(m2);
    core::array::from_fn(|i| Mat2::scalar(f2[i]) + shifted.scale(dd[i]))
}

enum Weights {
    Scalar(Vec<[C; 6]>),
    Block(Vec<[Mat2; 6]>),
}

fn etd_table(op: &LinearOp, h: f64) -> Weights {
    let scale = [1.0, 1.0, h, h, h, h];
    match op {
        LinearOp::Scalar(v) => Weights::Scalar(
            v.iter()
                .map(|&l| {
                    let w = etd_weights(l * h);
                    core::array::from_fn(|i| w[i] * scale[i])
                })
                .collect(),
        ),
        LinearOp::Block(v) => Weights::Block(
            v.iter()
                .map(|m| {
                    let w = block_function(&m.scale(C::new(h, 0.0)), etd_weights);
                    core::array::from_fn(|i| w[i].scale(C::new(scale[i], 0.0)))
                })
                .collect(),
        ),
    }
}

/// Σ_t W_t·x_t per mode, for (weight index, vector) pairs.
fn combine(w: &Weights, terms: &[(usize, &State, f64)], out: &mut [Vec<C>]) {
    let ncomp = out.len();
    let n = out[0].len();
    match w {
        Weights::Scalar(tab) => {
            for c in 0..ncomp {
                for i in 0..n {
                    let mut acc = C::new(0.0, 0.0);
                    for &(idx, x, s) in terms {
                        acc += tab[i][idx] * x[c][i] * s;
                    }
                    out[c][i] = acc;
                }
            }
        }
        Weights::Block(tab) => {
            for i in 0..n {
                let mut acc = [C::new(0.0, 0.0); 2];
                for &(idx, x, s) in terms {
                    let [p, q] = tab[i][idx].apply([x[0][i], x[1][i]]);
                    acc[0] += p * s;
                    acc[1] += q * s;
                }
                out[0][i] = acc[0];
                out[1][i] = acc[1];
            }
        }
    }
}

const E: usize = 0;
const E2: usize = 1;
const Q: usize = 2;
const F1: usize = 3;
const F2: usize = 4;
const F3: usize = 5;

/// Stateful integrator; IMEX-BDF2 keeps one step of history.
pub struct Integrator<'a, S: System + ?Sized> {
    system: &'a S,
    config: StepperConfig,
    etd: Option<Weights>,
    bdf: Option<BdfState>,
}

struct BdfState {
    first: Vec<Mat2>,
    second: Vec<Mat2>,
    prev: Option<(State, State)>,
}

fn zeros(ncomp: usize, n: usize) -> State {
    vec![vec![C::new(0.0, 0.0); n]; ncomp]
}

impl<'a, S: System + ?Sized> Integrator<'a, S> {
    pub fn new(system: &'a S, config: StepperConfig) -> Result<Self> {
        if !(config.dt > 0.0) {
            return Err(LabError::Config(format!("dt = {} must be positive", config.dt)));
        }
        let op = system.linear();
        if op.len() != system.grid().n() {
            return Err(LabError::GridMismatch(op.len(), system.grid().n()));
        }
        if matches!(op, LinearOp::Block(_)) && system.components() != 2 {
            return Err(LabError::Precondition("block operators need two components".into()));
        }
        let growth = config.dt * op.max_growth();
        // growth per step of the linear part; both schemes resolve it but
        // a step this coarse cannot follow the instability
        if growth > 2.0 {
            return Err(LabError::UnstableStep { dt: config.dt, growth });
        }
        let (etd, bdf) = match config.scheme {
            Scheme::EtdRk4 => (Some(etd_table(op, config.dt)), None),
            Scheme::ImexBdf2 => {
                let h = config.dt;
                let blocks: Vec<Mat2> = match op {
                    LinearOp::Scalar(v) => v.iter().map(|&l| Mat2::scalar(l)).collect(),
                    LinearOp::Block(v) => v.clone(),
                };
                let inv = |a: f64, b: f64| -> Result<Vec<Mat2>> {
                    blocks
                        .iter()
                        .map(|m| {
                            (Mat2::scalar(C::new(a, 0.0)) - m.scale(C::new(b * h, 0.0)))
                                .inverse()
                                .ok_or_else(|| LabError::UnstableStep { dt: h, growth })
                        })
                        .collect()
                };
                (None, Some(BdfState { first: inv(1.0, 1.0)?, second: inv(3.0, 2.0)?, prev: None }))
            }
        };
        Ok(Self { system, config, etd, bdf })
    }

    /// Advances `u` from `t` to `t + dt` in place.
    pub fn step(&mut self, t: f64, u: &mut State) -> Result<()> {
        let h = self.config.dt;
        let (sys, cfg) = (self.system, self.config);
        let (ncomp, n) = (u.len(), u[0].len());
        let eval = |t: f64, x: &State| -> Result<State> {
            let mut out = zeros(ncomp, n);
            sys.nonlinear(t, x, &mut out)?;
            if cfg.dealias {
                out.iter_mut().for_each(|c| field::dealias(sys.grid(), c));
            }
            Ok(out)
        };
        let nu = eval(t, u)?;
        if let Some(w) = &self.etd {
            let comb = |terms: &[(usize, &State, f64)]| {
                let mut out = zeros(ncomp, n);
                combine(w, terms, &mut out);
                out
            };
            let a = comb(&[(E2, u, 1.0), (Q, &nu, 1.0)]);
            let na = eval(t + 0.5 * h, &a)?;
            let b = comb(&[(E2, u, 1.0), (Q, &na, 1.0)]);
            let nb = eval(t + 0.5 * h, &b)?;
            let c = comb(&[(E2, &a, 1.0), (Q, &nb, 2.0), (Q, &nu, -1.0)]);
            let nc = eval(t + h, &c)?;
            *u = comb(&[(E, u, 1.0), (F1, &nu, 1.0), (F2, &na, 2.0), (F2, &nb, 2.0), (F3, &nc, 1.0)]);
        } else {
            let bdf = self.bdf.as_mut().expect("scheme without tables");
            let mut next = zeros(ncomp, n);
            match bdf.prev.take() {
                None => {
                    // one backward-Euler step to start the two-step scheme
                    for i in 0..n {
                        apply_solve(&bdf.first[i], ncomp, i, &mut next, |c| u[c][i] + nu[c][i] * h);
                    }
                }
                Some((uprev, nprev)) => {
                    for i in 0..n {
                        apply_solve(&bdf.second[i], ncomp, i, &mut next, |c| {
                            u[c][i] * 4.0 - uprev[c][i] + (nu[c][i] * 2.0 - nprev[c][i]) * (2.0 * h)
                        });
                    }
                }
            }
            bdf.prev = Some((u.clone(), nu));
            *u = next;
        }
        if u.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LabError::NonFinite(t + h));
        }
        Ok(())
    }
}

/// Solves one mode of the implicit stage. Scalar systems reuse the (0,0)
/// entry of the block for every component.
fn apply_solve(m: &Mat2, ncomp: usize, i: usize, out: &mut State, rhs: impl Fn(usize) -> C) {
    if ncomp == 2 && (m.b != C::new(0.0, 0.0) || m.c != C::new(0.0, 0.0)) {
        let [p, q] = m.apply([rhs(0), rhs(1)]);
        out[0][i] = p;
        out[1][i] = q;
    } else {
        for c in 0..ncomp {
            out[c][i] = m.a * rhs(c);
        }
    }
}

/// Recorded times and states.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

/// Integrates to `config.t_end`, calling `observe` on the initial state and
/// after every `record_stride` steps (and at the final time).
pub fn simulate_with<S: System + ?Sized>(
    system: &S,
    initial: State,
    config: StepperConfig,
    mut observe: impl FnMut(f64, &State) -> Result<()>,
) -> Result<State> {
    let mut u = initial;
    observe(0.0, &u)?;
    if config.t_end <= 0.0 {
        return Ok(u);
    }
    let steps = (config.t_end / config.dt).round().max(1.0) as usize;
    let mut integ = Integrator::new(system, config)?;
    let stride = config.record_stride.max(1);
    for s in 0..steps {
        let t = s as f64 * config.dt;
        integ.step(t, &mut u)?;
        let done = s + 1;
        if done % stride == 0 || done == steps {
            observe(done as f64 * config.dt, &u)?;
        }
    }
    Ok(u)
}

pub fn simulate<S: System + ?Sized>(system: &S, initial: State, config: StepperConfig) -> Result<Trajectory> {
    let mut traj = Trajectory::default();
    simulate_with(system, initial, config, |t, u| {
        traj.times.push(t);
        traj.states.push(u.clone());
        Ok(())
    })?;
    Ok(traj)
}
