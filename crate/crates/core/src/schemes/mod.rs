//! Discrete projection schemes assembled as semi-discrete ODE systems.
//!
//! Each builder turns a [`TestProblem`] into a [`SemiDiscreteSystem`]: a state
//! of size `s(n)`, a right-hand side `Φ(t, a)`, an initial state and a map
//! reconstructing the approximant on `Ω`.

mod galerkin;
mod nodal;
mod spectral;

use std::fmt;
use std::str::FromStr;

pub use galerkin::Tridiagonal;
pub use spectral::DftPath;

use crate::error::{Error, Result};
use crate::model::{ChebyshevGrid, UniformGrid};
use crate::problems::TestProblem;
use crate::projection::{fourier_reconstruct, ChebyshevBasis, TentBasis};
use crate::quadrature::{clenshaw_curtis, composite_gauss_2, trapezium_rule};
use crate::timestep::OdeSystem;
use galerkin::{Gauss2Galerkin, LumpedGalerkin};
use nodal::{NodalCollocation, Sampler};
use spectral::{deinterleave, SpectralGalerkin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    FeCollocation,
    ChebCollocation,
    FeGalerkin,
    SpectralGalerkin,
}

impl SchemeKind {
    pub fn token(self) -> &'static str {
        match self {
            SchemeKind::FeCollocation => "fe-collocation",
            SchemeKind::ChebCollocation => "cheb-collocation",
            SchemeKind::FeGalerkin => "fe-galerkin",
            SchemeKind::SpectralGalerkin => "spectral-galerkin",
        }
    }

    pub fn is_galerkin(self) -> bool {
        matches!(self, SchemeKind::FeGalerkin | SchemeKind::SpectralGalerkin)
    }

    pub fn needs_periodic(self) -> bool {
        self == SchemeKind::SpectralGalerkin
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        [
            SchemeKind::FeCollocation,
            SchemeKind::ChebCollocation,
            SchemeKind::FeGalerkin,
            SchemeKind::SpectralGalerkin,
        ]
        .into_iter()
        .find(|k| k.token().eq_ignore_ascii_case(token))
        .ok_or_else(|| Error::Parse(format!("unknown scheme '{token}'")))
    }
}

/// Quadrature for the integral term of Chebyshev collocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChebQuadrature {
    /// Composite trapezium on `m + 1` equispaced nodes.
    Trapezium { m: usize },
    /// Clenshaw–Curtis at the collocation nodes.
    ClenshawCurtis,
    /// Clenshaw–Curtis on `max(8n, 256)` nodes, an accurate stand-in for the
    /// exact integral.
    Reference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalerkinVariant {
    Lumped,
    Gauss2,
}

/// Scheme plus its quadrature/variant choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeSpec {
    /// Finite-element collocation with composite trapezium quadrature.
    FeCollocation,
    /// Finite-element collocation with two-point Gauss on each element
    /// split into `refine` pieces.
    FeCollocationReference { refine: usize },
    ChebCollocation(ChebQuadrature),
    FeGalerkin(GalerkinVariant),
    SpectralGalerkin(DftPath),
}

impl SchemeSpec {
    pub fn kind(&self) -> SchemeKind {
        match self {
            SchemeSpec::FeCollocation | SchemeSpec::FeCollocationReference { .. } => {
                SchemeKind::FeCollocation
            }
            SchemeSpec::ChebCollocation(_) => SchemeKind::ChebCollocation,
            SchemeSpec::FeGalerkin(_) => SchemeKind::FeGalerkin,
            SchemeSpec::SpectralGalerkin(_) => SchemeKind::SpectralGalerkin,
        }
    }

    pub fn variant(&self) -> &'static str {
        match self {
            SchemeSpec::FeCollocation => "trapezium",
            SchemeSpec::FeCollocationReference { .. } => "reference",
            SchemeSpec::ChebCollocation(ChebQuadrature::Trapezium { .. }) => "trapezium",
            SchemeSpec::ChebCollocation(ChebQuadrature::ClenshawCurtis) => "cc",
            SchemeSpec::ChebCollocation(ChebQuadrature::Reference) => "reference",
            SchemeSpec::FeGalerkin(GalerkinVariant::Lumped) => "lumped",
            SchemeSpec::FeGalerkin(GalerkinVariant::Gauss2) => "gauss2",
            SchemeSpec::SpectralGalerkin(DftPath::Fft) => "trapezium",
            SchemeSpec::SpectralGalerkin(DftPath::Direct) => "trapezium-direct",
        }
    }

    /// The same projector with the integral term evaluated to high accuracy,
    /// where such a variant exists.
    pub fn reference(&self) -> SchemeSpec {
        match self {
            SchemeSpec::FeCollocation | SchemeSpec::FeCollocationReference { .. } => {
                SchemeSpec::FeCollocationReference { refine: 8 }
            }
            SchemeSpec::ChebCollocation(_) => SchemeSpec::ChebCollocation(ChebQuadrature::Reference),
            other => *other,
        }
    }
}

/// Bound constants derived from the assembled weight matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeDiagnostics {
    /// Maximum absolute row sum of the assembled weight matrix, a proxy for `‖P_n W‖`.
    pub discrete_w_infnorm: f64,
    /// `T ‖P_n W‖ ‖f'‖∞`.
    pub beta_n: f64,
    /// `κ_Ω ‖P_n W‖ ‖f‖∞`, `κ_Ω = 1` in `C(Ω)` and `|Ω|^{1/2}` in `L²(Ω)`.
    pub gamma_n: f64,
    /// `1 + β_n / T`.
    pub lipschitz: f64,
}

#[derive(Clone, Debug)]
enum Operator {
    Nodal(NodalCollocation),
    Lumped(LumpedGalerkin),
    Gauss2(Gauss2Galerkin),
    Spectral(SpectralGalerkin),
}

#[derive(Clone, Debug)]
enum Reconstruction {
    Tent(TentBasis),
    Chebyshev {
        basis: ChebyshevBasis,
        a: f64,
        b: f64,
    },
    Fourier,
}

/// The `s(n)`-dimensional ODE produced by a discrete projection scheme.
#[derive(Clone, Debug)]
pub struct SemiDiscreteSystem {
    spec: SchemeSpec,
    n: usize,
    h_x: f64,
    initial: Vec<f64>,
    diagnostics: SchemeDiagnostics,
    operator: Operator,
    reconstruction: Reconstruction,
    problem: TestProblem,
}

impl SemiDiscreteSystem {
    pub fn kind(&self) -> SchemeKind {
        self.spec.kind()
    }

    pub fn spec(&self) -> SchemeSpec {
        self.spec
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.kind(), self.spec.variant())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h_x(&self) -> f64 {
        self.h_x
    }

    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn diagnostics(&self) -> SchemeDiagnostics {
        self.diagnostics
    }

    pub fn problem(&self) -> &TestProblem {
        &self.problem
    }

    /// Collocation/quadrature nodes where the state holds nodal values;
    /// `None` for modal states.
    pub fn nodes(&self) -> Option<&[f64]> {
        match &self.operator {
            Operator::Nodal(c) => Some(&c.nodes),
            Operator::Lumped(l) => Some(&l.nodal.nodes),
            Operator::Gauss2(_) => match &self.reconstruction {
                Reconstruction::Tent(t) => Some(t.grid().nodes()),
                _ => None,
            },
            Operator::Spectral(_) => None,
        }
    }

    /// `Φ(t, a)` into `out`; both slices must have length `dim`.
    pub fn rhs_into(&self, t: f64, a: &[f64], out: &mut [f64]) {
        match &self.operator {
            Operator::Nodal(c) => c.rhs(t, a, out),
            Operator::Lumped(l) => l.rhs(t, a, out),
            Operator::Gauss2(g) => g.rhs(t, a, out),
            Operator::Spectral(s) => s.rhs(t, a, out),
        }
    }

    pub fn rhs_eval(&self, t: f64, a: &[f64]) -> Result<Vec<f64>> {
        self.check_len(a)?;
        let mut out = vec![0.0; self.dim()];
        self.rhs_into(t, a, &mut out);
        Ok(out)
    }

    /// Value of the approximant encoded by `a` at `x`.
    pub fn reconstruct(&self, a: &[f64], x: f64) -> Result<f64> {
        self.check_len(a)?;
        match &self.reconstruction {
            Reconstruction::Tent(basis) => basis.interpolate(a, x),
            Reconstruction::Chebyshev { basis, a: lo, b: hi } => {
                if x < *lo || x > *hi {
                    return Err(Error::OutOfInterval { x, a: *lo, b: *hi });
                }
                basis.interpolate(a, to_reference(x, *lo, *hi))
            }
            Reconstruction::Fourier => Ok(fourier_reconstruct(&deinterleave(a), x)),
        }
    }

    pub fn reconstruct_on(&self, a: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
        self.check_len(a)?;
        match &self.reconstruction {
            Reconstruction::Fourier => {
                let c = deinterleave(a);
                Ok(xs.iter().map(|&x| fourier_reconstruct(&c, x)).collect())
            }
            _ => xs.iter().map(|&x| self.reconstruct(a, x)).collect(),
        }
    }

    /// State representing `P_n v` for this scheme's projector: nodal values
    /// for collocation and lumped Galerkin, the L² projection for the
    /// Gauss variant, trigonometric interpolation for the Fourier basis.
    pub fn project(&self, v: impl Fn(f64) -> f64) -> Vec<f64> {
        match &self.operator {
            Operator::Nodal(c) => c.nodes.iter().map(|&x| v(x)).collect(),
            Operator::Lumped(l) => l.nodal.nodes.iter().map(|&x| v(x)).collect(),
            Operator::Gauss2(g) => g.project(v),
            Operator::Spectral(s) => s.project(v),
        }
    }

    fn check_len(&self, a: &[f64]) -> Result<()> {
        if a.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        Ok(())
    }
}

impl OdeSystem for SemiDiscreteSystem {
    fn dim(&self) -> usize {
        self.initial.len()
    }

    fn initial_state(&self) -> &[f64] {
        &self.initial
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        self.rhs_into(t, y, dydt)
    }
}

pub fn rhs_eval(sys: &SemiDiscreteSystem, t: f64, a: &[f64]) -> Result<Vec<f64>> {
    sys.rhs_eval(t, a)
}

pub fn reconstruct_on(sys: &SemiDiscreteSystem, a: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    sys.reconstruct_on(a, xs)
}

fn to_reference(x: f64, a: f64, b: f64) -> f64 {
    ((2.0 * x - a - b) / (b - a)).clamp(-1.0, 1.0)
}

fn from_reference(z: f64, a: f64, b: f64) -> f64 {
    0.5 * (a + b) + 0.5 * (b - a) * z
}

fn require_compact(problem: &TestProblem, kind: SchemeKind) -> Result<()> {
    if problem.is_periodic() {
        return Err(Error::PeriodicityMismatch {
            scheme: kind.token(),
            problem: problem.name().to_string(),
            required: "compact (non-periodic)",
        });
    }
    Ok(())
}

fn require_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!(
            "discretization size n must be >= {min}, got {n}"
        )));
    }
    Ok(())
}

fn diagnostics(problem: &TestProblem, norm: f64, l2: bool) -> SchemeDiagnostics {
    let horizon = problem.horizon();
    let kappa = if l2 {
        problem.interval().length().sqrt()
    } else {
        1.0
    };
    let beta_n = horizon * norm * problem.firing().derivative_sup_norm();
    SchemeDiagnostics {
        discrete_w_infnorm: norm,
        beta_n,
        gamma_n: kappa * norm * problem.firing().sup_norm(),
        lipschitz: 1.0 + beta_n / horizon,
    }
}

/// Dispatches on `spec`.
pub fn build(problem: &TestProblem, n: usize, spec: SchemeSpec) -> Result<SemiDiscreteSystem> {
    match spec {
        SchemeSpec::FeCollocation => build_fe_collocation(problem, n),
        SchemeSpec::FeCollocationReference { refine } => {
            build_fe_collocation_reference(problem, n, refine)
        }
        SchemeSpec::ChebCollocation(q) => build_cheb_collocation(problem, n, q),
        SchemeSpec::FeGalerkin(v) => build_fe_galerkin(problem, n, v),
        SchemeSpec::SpectralGalerkin(path) => build_spectral_galerkin_with(problem, n, path),
    }
}

/// Finite-element collocation with composite trapezium quadrature on the
/// collocation grid: `W_ij = w(x_i, x_j) ρ_j`.
pub fn build_fe_collocation(problem: &TestProblem, n: usize) -> Result<SemiDiscreteSystem> {
    require_compact(problem, SchemeKind::FeCollocation)?;
    require_n(n, 2)?;
    let grid = UniformGrid::new(problem.interval(), n)?;
    let rule = trapezium_rule(problem.interval(), n)?;
    let nodal = NodalCollocation::new(problem, grid.nodes().to_vec(), &rule, Sampler::Identity);
    finish_fe_nodal(problem, grid, nodal, SchemeSpec::FeCollocation)
}

/// Finite-element collocation whose integral term is computed with two-point
/// Gauss on every element split into `refine` sub-elements.
pub fn build_fe_collocation_reference(
    problem: &TestProblem,
    n: usize,
    refine: usize,
) -> Result<SemiDiscreteSystem> {
    require_compact(problem, SchemeKind::FeCollocation)?;
    require_n(n, 2)?;
    require_n(refine, 1)?;
    let grid = UniformGrid::new(problem.interval(), n)?;
    let basis = TentBasis::new(grid.clone())?;
    let fine = UniformGrid::new(problem.interval(), n * refine)?;
    let rule = composite_gauss_2(&fine)?;
    let sampler = Sampler::tent(&basis, rule.nodes())?;
    let nodal = NodalCollocation::new(problem, grid.nodes().to_vec(), &rule, sampler);
    finish_fe_nodal(
        problem,
        grid,
        nodal,
        SchemeSpec::FeCollocationReference { refine },
    )
}

fn finish_fe_nodal(
    problem: &TestProblem,
    grid: UniformGrid,
    nodal: NodalCollocation,
    spec: SchemeSpec,
) -> Result<SemiDiscreteSystem> {
    let initial = grid.nodes().iter().map(|&x| problem.initial(x)).collect();
    let diagnostics = diagnostics(problem, nodal.weight_infnorm(), false);
    Ok(SemiDiscreteSystem {
        spec,
        n: grid.n(),
        h_x: grid.h(),
        initial,
        diagnostics,
        operator: Operator::Nodal(nodal),
        reconstruction: Reconstruction::Tent(TentBasis::new(grid)?),
        problem: problem.clone(),
    })
}

/// Chebyshev spectral collocation at `cos(iπ/n)` (mapped to `Ω`).
pub fn build_cheb_collocation(
    problem: &TestProblem,
    n: usize,
    quadrature: ChebQuadrature,
) -> Result<SemiDiscreteSystem> {
    require_compact(problem, SchemeKind::ChebCollocation)?;
    require_n(n, 2)?;
    let (lo, hi) = (problem.interval().a(), problem.interval().b());
    let basis = ChebyshevBasis::new(ChebyshevGrid::new(n)?);
    let nodes: Vec<f64> = basis
        .grid()
        .nodes()
        .iter()
        .map(|&z| from_reference(z, lo, hi))
        .collect();
    let nodal = match quadrature {
        ChebQuadrature::ClenshawCurtis => {
            let mut rule = clenshaw_curtis(n)?.mapped(lo, hi)?;
            // identical abscissae keep the identity sampler exact
            rule = crate::quadrature::QuadratureRule::new(
                nodes.clone(),
                rule.weights().to_vec(),
                problem.interval(),
            )?;
            NodalCollocation::new(problem, nodes.clone(), &rule, Sampler::Identity)
        }
        ChebQuadrature::Trapezium { m } => {
            require_n(m, 1)?;
            let rule = trapezium_rule(problem.interval(), m)?;
            let reference: Vec<f64> = rule.nodes().iter().map(|&z| to_reference(z, lo, hi)).collect();
            let sampler = Sampler::chebyshev(&basis, &reference);
            NodalCollocation::new(problem, nodes.clone(), &rule, sampler)
        }
        ChebQuadrature::Reference => {
            let m = (8 * n).max(256);
            let cc = clenshaw_curtis(m)?;
            let rule = cc.mapped(lo, hi)?;
            let sampler = Sampler::chebyshev(&basis, cc.nodes());
            NodalCollocation::new(problem, nodes.clone(), &rule, sampler)
        }
    };
    let initial = nodes.iter().map(|&x| problem.initial(x)).collect();
    let diagnostics = diagnostics(problem, nodal.weight_infnorm(), false);
    Ok(SemiDiscreteSystem {
        spec: SchemeSpec::ChebCollocation(quadrature),
        n,
        h_x: problem.interval().length() / n as f64,
        initial,
        diagnostics,
        operator: Operator::Nodal(nodal),
        reconstruction: Reconstruction::Chebyshev { basis, a: lo, b: hi },
        problem: problem.clone(),
    })
}

/// Finite-element Galerkin with hat functions.
pub fn build_fe_galerkin(
    problem: &TestProblem,
    n: usize,
    variant: GalerkinVariant,
) -> Result<SemiDiscreteSystem> {
    require_compact(problem, SchemeKind::FeGalerkin)?;
    require_n(n, 2)?;
    let grid = UniformGrid::new(problem.interval(), n)?;
    let (operator, initial, norm) = match variant {
        GalerkinVariant::Lumped => {
            let rule = trapezium_rule(problem.interval(), n)?;
            let nodal =
                NodalCollocation::new(problem, grid.nodes().to_vec(), &rule, Sampler::Identity);
            let norm = nodal.weight_infnorm();
            let initial = grid.nodes().iter().map(|&x| problem.initial(x)).collect();
            let lumped = LumpedGalerkin {
                nodal,
                rho: rule.weights().to_vec(),
            };
            (Operator::Lumped(lumped), initial, norm)
        }
        GalerkinVariant::Gauss2 => {
            let g = Gauss2Galerkin::new(problem, &grid)?;
            let initial = g.project(|x| problem.initial(x));
            let norm = g.weight_infnorm();
            (Operator::Gauss2(g), initial, norm)
        }
    };
    Ok(SemiDiscreteSystem {
        spec: SchemeSpec::FeGalerkin(variant),
        n,
        h_x: grid.h(),
        initial,
        diagnostics: diagnostics(problem, norm, true),
        operator,
        reconstruction: Reconstruction::Tent(TentBasis::new(grid)?),
        problem: problem.clone(),
    })
}

/// Fourier spectral Galerkin on `2n + 1` modes, transforms by FFT.
pub fn build_spectral_galerkin(problem: &TestProblem, n: usize) -> Result<SemiDiscreteSystem> {
    build_spectral_galerkin_with(problem, n, DftPath::Fft)
}

pub fn build_spectral_galerkin_with(
    problem: &TestProblem,
    n: usize,
    path: DftPath,
) -> Result<SemiDiscreteSystem> {
    if !problem.is_periodic() {
        return Err(Error::PeriodicityMismatch {
            scheme: SchemeKind::SpectralGalerkin.token(),
            problem: problem.name().to_string(),
            required: "periodic",
        });
    }
    require_n(n, 1)?;
    let op = SpectralGalerkin::new(problem, n, path)?;
    let initial = op.project(|x| problem.initial(x));
    debug_assert_eq!(initial.len(), op.dim());
    let m = 2 * n + 1;
    Ok(SemiDiscreteSystem {
        spec: SchemeSpec::SpectralGalerkin(path),
        n,
        h_x: problem.interval().length() / m as f64,
        initial,
        diagnostics: diagnostics(problem, op.weight_infnorm(), true),
        operator: Operator::Spectral(op),
        reconstruction: Reconstruction::Fourier,
        problem: problem.clone(),
    })
}
