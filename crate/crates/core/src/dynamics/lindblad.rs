//! GKLS generators, their canonical diagonal form, and time evolution.

use serde::Serialize;

use crate::dynamics::channel::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};

/// `L(ρ) = −i[H, ρ] + Σ_α λ_α (A_α ρ A_α† − ½{A_α† A_α, ρ})`.
///
/// Rates carry no sign constraint: negative rates encode evolutions that
/// are not CP-divisible.
#[derive(Clone, Debug, Serialize)]
pub struct Lindbladian {
    #[serde(rename = "H", serialize_with = "crate::io::ser_matrix")]
    pub h: CMat,
    #[serde(serialize_with = "crate::io::ser_matrices")]
    pub jumps: Vec<CMat>,
    pub rates: Vec<f64>,
}

/// Tolerance on Hermiticity preservation and trace annihilation of inputs to
/// [`canonical_form`].
pub const GENERATOR_TOL: f64 = 1e-8;

impl Lindbladian {
    pub fn new(h: CMat, jumps: Vec<CMat>, rates: Vec<f64>) -> Result<Self> {
        let d = linalg::ensure_square(&h)?;
        linalg::ensure_hermitian(&h)?;
        if jumps.len() != rates.len() {
            return Err(Error::DimensionMismatch {
                expected: jumps.len(),
                found: rates.len(),
            });
        }
        for a in &jumps {
            linalg::ensure_dim(a, d)?;
        }
        Ok(Self { h, jumps, rates })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            h: CMat::zeros(d, d),
            jumps: vec![],
            rates: vec![],
        }
    }

    pub fn hamiltonian(h: CMat) -> Result<Self> {
        Self::new(h, vec![], vec![])
    }

    /// Qubit decay `|1⟩ → |0⟩` at rate `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Self {
        Self {
            h: CMat::zeros(2, 2),
            jumps: vec![linalg::unit(2, 0, 1)],
            rates: vec![gamma],
        }
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Whether the jumps are traceless and Hilbert-Schmidt orthonormal.
    pub fn is_canonical(&self) -> bool {
        let tol = 1e-10;
        self.jumps.iter().enumerate().all(|(a, ja)| {
            linalg::trace(ja).norm() < tol
                && self.jumps.iter().enumerate().all(|(b, jb)| {
                    let target = if a == b { 1.0 } else { 0.0 };
                    (linalg::hs_inner(ja, jb) - linalg::re(target)).norm() < tol
                })
        })
    }

    pub fn superop(&self) -> CMat {
        let i = c(0.0, 1.0);
        let mut s = (linalg::left_mult(&self.h) - linalg::right_mult(&self.h)) * (-i);
        for (a, &rate) in self.jumps.iter().zip(&self.rates) {
            let ada = a.adjoint() * a;
            let term = linalg::sandwich_super(a, &a.adjoint())
                - (linalg::left_mult(&ada) + linalg::right_mult(&ada)).scale(0.5);
            s += term.scale(rate);
        }
        s
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        linalg::ensure_dim(rho, self.dim())?;
        let i = c(0.0, 1.0);
        let mut out = linalg::commutator(&self.h, rho) * (-i);
        for (a, &rate) in self.jumps.iter().zip(&self.rates) {
            let ada = a.adjoint() * a;
            out +=
                (a * rho * a.adjoint() - linalg::anticommutator(&ada, rho).scale(0.5)).scale(rate);
        }
        Ok(out)
    }

    /// Generator of the evolution with an idle ancilla of dimension `d_anc`.
    /// Jumps are rescaled so that canonical inputs stay canonical.
    pub fn tensor_identity(&self, d_anc: usize) -> Self {
        let id = linalg::identity(d_anc);
        let norm = 1.0 / (d_anc as f64).sqrt();
        Self {
            h: linalg::kron(&self.h, &id),
            jumps: self
                .jumps
                .iter()
                .map(|a| linalg::kron(a, &id).scale(norm))
                .collect(),
            rates: self.rates.iter().map(|r| r * d_anc as f64).collect(),
        }
    }
}

/// Kossakowski coefficients `χ_mn` with `G(ρ) = Σ χ_mn X_m ρ X_n`
/// over the orthonormal Hermitian basis (index 0 is `1/√d`).
pub fn kossakowski(g: &CMat, d: usize) -> Result<CMat> {
    if g.nrows() != d * d || g.ncols() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: g.nrows(),
        });
    }
    let basis = linalg::hermitian_basis(d);
    let n = basis.len();
    let mut chi = CMat::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            let elem = linalg::kron(&basis[k].map(|z| z.conj()), &basis[m]);
            chi[(m, k)] = linalg::hs_inner(&elem, g);
        }
    }
    Ok(chi)
}

/// Extracts `(H, rates, jumps)` from a generator superoperator.
///
/// The dissipative block of the Kossakowski matrix is diagonalized; the
/// jumps come out traceless and orthonormal, ordered by ascending rate.
pub fn canonical_form(g: &CMat, d: usize) -> Result<Lindbladian> {
    let chi = kossakowski(g, d)?;
    let dev = linalg::hermitian_deviation(&chi);
    if dev > GENERATOR_TOL * linalg::frobenius(&chi).max(1.0) {
        return Err(Error::InvalidGenerator(format!(
            "not Hermiticity preserving (deviation {dev:.3e})"
        )));
    }
    let dual_one = linalg::apply_super(&g.adjoint(), &linalg::identity(d));
    let drift = linalg::frobenius(&dual_one);
    if drift > GENERATOR_TOL * linalg::frobenius(g).max(1.0) {
        return Err(Error::InvalidGenerator(format!(
            "not trace annihilating (‖G†(1)‖ = {drift:.3e})"
        )));
    }
    let basis = linalg::hermitian_basis(d);
    let n = basis.len();
    let sd = (d as f64).sqrt();
    let mut k = linalg::identity(d) * (chi[(0, 0)] / (2.0 * d as f64));
    for m in 1..n {
        k += &basis[m] * (chi[(m, 0)] / sd);
    }
    let mut h = (&k - k.adjoint()) * c(0.0, 0.5);
    let tr = linalg::trace(&h) / d as f64;
    for i in 0..d {
        h[(i, i)] -= tr;
    }
    let h = linalg::hermitize(&h);
    let a = linalg::hermitize(&chi.view((1, 1), (n - 1, n - 1)).into_owned());
    let e = linalg::eigh(&a)?;
    let mut jumps = Vec::with_capacity(n - 1);
    for col in 0..n - 1 {
        let mut op = CMat::zeros(d, d);
        for m in 0..n - 1 {
            op += &basis[m + 1] * e.vectors[(m, col)];
        }
        jumps.push(op);
    }
    Ok(Lindbladian {
        h,
        jumps,
        rates: e.values.clone(),
    })
}

/// A possibly time-dependent evolution specified by its generator.
pub trait Evolution: Send + Sync {
    fn dim(&self) -> usize;

    fn label(&self) -> String;

    /// Generator in GKLS form at time `t`.
    fn generator(&self, t: f64) -> Result<Lindbladian>;

    fn generator_superop(&self, t: f64) -> Result<CMat> {
        Ok(self.generator(t)?.superop())
    }

    /// Exact propagator `Φ_{t,0}` when a closed form is known.
    fn propagator(&self, _t: f64) -> Option<QuantumChannel> {
        None
    }
}

impl Evolution for Lindbladian {
    fn dim(&self) -> usize {
        Lindbladian::dim(self)
    }

    fn label(&self) -> String {
        format!("lindblad(d={}, jumps={})", self.dim(), self.jumps.len())
    }

    fn generator(&self, _t: f64) -> Result<Lindbladian> {
        Ok(self.clone())
    }
}

/// Fixed `H` and jumps with rates interpolated linearly from a table.
#[derive(Clone, Debug)]
pub struct ScheduledLindbladian {
    pub base: Lindbladian,
    /// `(t, rates)` rows sorted by time.
    pub schedule: Vec<(f64, Vec<f64>)>,
}

impl ScheduledLindbladian {
    pub fn new(base: Lindbladian, mut schedule: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if schedule.is_empty() {
            return Err(Error::Schema("empty rate schedule".into()));
        }
        for (_, r) in &schedule {
            if r.len() != base.jumps.len() {
                return Err(Error::DimensionMismatch {
                    expected: base.jumps.len(),
                    found: r.len(),
                });
            }
        }
        schedule.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { base, schedule })
    }

    pub fn rates_at(&self, t: f64) -> Vec<f64> {
        let s = &self.schedule;
        if t <= s[0].0 {
            return s[0].1.clone();
        }
        for w in s.windows(2) {
            let (t0, r0) = (&w[0].0, &w[0].1);
            let (t1, r1) = (&w[1].0, &w[1].1);
            if t <= *t1 {
                let x = (t - t0) / (t1 - t0);
                return r0.iter().zip(r1).map(|(a, b)| a + x * (b - a)).collect();
            }
        }
        s[s.len() - 1].1.clone()
    }
}

impl Evolution for ScheduledLindbladian {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn label(&self) -> String {
        format!("scheduled(d={}, rows={})", self.dim(), self.schedule.len())
    }

    fn generator(&self, t: f64) -> Result<Lindbladian> {
        Ok(Lindbladian {
            rates: self.rates_at(t),
            ..self.base.clone()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DepolarizingKind {
    Markov,
    NonMarkov,
}

/// Qubit depolarizing evolution `Δ_{λ_t}` with contraction factor
/// `1 − λ_t = e^{−t}` (Markov) or `e^{−t} cos 2t` (non-Markov).
#[derive(Clone, Copy, Debug)]
pub struct DepolarizingFamily {
    pub kind: DepolarizingKind,
}

impl DepolarizingFamily {
    pub fn new(kind: DepolarizingKind) -> Self {
        Self { kind }
    }

    /// Surviving fraction `1 − λ_t`.
    pub fn eta(&self, t: f64) -> f64 {
        match self.kind {
            DepolarizingKind::Markov => (-t).exp(),
            DepolarizingKind::NonMarkov => (-t).exp() * (2.0 * t).cos(),
        }
    }

    pub fn eta_dot(&self, t: f64) -> f64 {
        match self.kind {
            DepolarizingKind::Markov => -(-t).exp(),
            DepolarizingKind::NonMarkov => -(-t).exp() * ((2.0 * t).cos() + 2.0 * (2.0 * t).sin()),
        }
    }

    pub fn lambda(&self, t: f64) -> f64 {
        1.0 - self.eta(t)
    }

    /// Decay rate `r = −η̇/η` of the Bloch vector; singular where `η = 0`.
    pub fn decay_rate(&self, t: f64) -> f64 {
        match self.kind {
            DepolarizingKind::Markov => 1.0,
            DepolarizingKind::NonMarkov => 1.0 + 2.0 * (2.0 * t).tan(),
        }
    }

    /// Normalized Pauli jumps `σ_k/√2`.
    pub fn jumps() -> Vec<CMat> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let x = linalg::real_matrix(2, &[0.0, h, h, 0.0]);
        let mut y = CMat::zeros(2, 2);
        y[(0, 1)] = c(0.0, -h);
        y[(1, 0)] = c(0.0, h);
        let z = linalg::real_matrix(2, &[h, 0.0, 0.0, -h]);
        vec![x, y, z]
    }
}

impl Evolution for DepolarizingFamily {
    fn dim(&self) -> usize {
        2
    }

    fn label(&self) -> String {
        match self.kind {
            DepolarizingKind::Markov => "depolarizing:markov".into(),
            DepolarizingKind::NonMarkov => "depolarizing:nonmarkov".into(),
        }
    }

    fn generator(&self, t: f64) -> Result<Lindbladian> {
        // Σ_k (σ_k ρ σ_k − ρ) = −4(ρ − 1/2), so each normalized jump carries r/2.
        let rate = 0.5 * self.decay_rate(t);
        Ok(Lindbladian {
            h: CMat::zeros(2, 2),
            jumps: Self::jumps(),
            rates: vec![rate; 3],
        })
    }

    fn propagator(&self, t: f64) -> Option<QuantumChannel> {
        Some(QuantumChannel::depolarizing(2, self.lambda(t)))
    }
}

/// An evolution acting on the first factor of a system-ancilla pair.
pub struct WithAncilla<'a> {
    pub inner: &'a dyn Evolution,
    pub d_anc: usize,
}

impl Evolution for WithAncilla<'_> {
    fn dim(&self) -> usize {
        self.inner.dim() * self.d_anc
    }

    fn label(&self) -> String {
        format!("{} ⊗ id_{}", self.inner.label(), self.d_anc)
    }

    fn generator(&self, t: f64) -> Result<Lindbladian> {
        Ok(self.inner.generator(t)?.tensor_identity(self.d_anc))
    }

    fn propagator(&self, t: f64) -> Option<QuantumChannel> {
        self.inner
            .propagator(t)
            .map(|p| p.tensor_with_identity(self.d_anc))
    }
}

/// Uniform time grid `0, dt, …, n·dt` with `n = round(T/dt)`.
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::OutOfRange {
            name: "dt",
            value: dt,
            range: "(0, ∞)",
        });
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::OutOfRange {
            name: "T",
            value: t_max,
            range: "[0, ∞)",
        });
    }
    let n = (t_max / dt).round() as usize;
    Ok((0..=n).map(|k| k as f64 * dt).collect())
}

/// Largest tolerated drift of `Tr ρ` during [`evolve`].
pub const TRACE_DRIFT_TOL: f64 = 1e-6;

/// Fixed-step RK4 on the vectorized master equation, re-Hermitizing each
/// step. The input may be any Hermitian operator; its trace is monitored.
pub fn evolve(evo: &dyn Evolution, rho0: &CMat, t_max: f64, dt: f64) -> Result<Vec<CMat>> {
    let d = evo.dim();
    linalg::ensure_dim(rho0, d)?;
    let grid = time_grid(t_max, dt)?;
    let tr0 = linalg::trace(rho0).re;
    let mut out = Vec::with_capacity(grid.len());
    let mut v = linalg::vec(rho0);
    out.push(rho0.clone());
    for &t in &grid[..grid.len() - 1] {
        let g0 = evo.generator_superop(t)?;
        let gh = evo.generator_superop(t + 0.5 * dt)?;
        let g1 = evo.generator_superop(t + dt)?;
        let k1 = &g0 * &v;
        let k2 = &gh * (&v + &k1 * linalg::re(0.5 * dt));
        let k3 = &gh * (&v + &k2 * linalg::re(0.5 * dt));
        let k4 = &g1 * (&v + &k3 * linalg::re(dt));
        v += (k1 + (k2 + k3) * linalg::re(2.0) + k4) * linalg::re(dt / 6.0);
        let rho = linalg::hermitize(&linalg::unvec(&v, d, d));
        let drift = (linalg::trace(&rho).re - tr0).abs();
        if !(drift <= TRACE_DRIFT_TOL) {
            return Err(Error::TraceDrift { drift });
        }
        v = linalg::vec(&rho);
        out.push(rho);
    }
    Ok(out)
}

/// States on the time grid, from the closed-form propagator when one exists
/// and from [`evolve`] otherwise.
pub fn trajectory(evo: &dyn Evolution, rho0: &CMat, t_max: f64, dt: f64) -> Result<Vec<CMat>> {
    let grid = time_grid(t_max, dt)?;
    if evo.propagator(0.0).is_some() {
        grid.iter()
            .map(|&t| {
                let p = evo.propagator(t).expect("closed form");
                Ok(linalg::hermitize(&p.apply(rho0)?))
            })
            .collect()
    } else {
        evolve(evo, rho0, t_max, dt)
    }
}

/// Propagators `Φ_{t,0}` on the time grid: closed form when available,
/// otherwise RK4 on the superoperator `Ṗ = L_t P`.
pub fn trajectory_channels(
    evo: &dyn Evolution,
    t_max: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<QuantumChannel>)> {
    let grid = time_grid(t_max, dt)?;
    let d = evo.dim();
    if evo.propagator(0.0).is_some() {
        let chans = grid
            .iter()
            .map(|&t| evo.propagator(t).expect("closed form"))
            .collect();
        return Ok((grid, chans));
    }
    let mut p = linalg::identity(d * d);
    let mut chans = vec![QuantumChannel::from_superop(d, d, p.clone())?];
    for &t in &grid[..grid.len() - 1] {
        let g0 = evo.generator_superop(t)?;
        let gh = evo.generator_superop(t + 0.5 * dt)?;
        let g1 = evo.generator_superop(t + dt)?;
        let k1 = &g0 * &p;
        let k2 = &gh * (&p + &k1 * linalg::re(0.5 * dt));
        let k3 = &gh * (&p + &k2 * linalg::re(0.5 * dt));
        let k4 = &g1 * (&p + &k3 * linalg::re(dt));
        p += (k1 + (k2 + k3) * linalg::re(2.0) + k4) * linalg::re(dt / 6.0);
        chans.push(QuantumChannel::from_superop(d, d, p.clone())?);
    }
    Ok((grid, chans))
}
