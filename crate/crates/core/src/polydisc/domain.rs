use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Component, Domain, Green};
use crate::weights::{PhiSpec, PsiSpec};
use crate::C64;

/// One factor `Dⱼ` with its poles `(z_{j,k}, p_{j,k})` and weight `φⱼ`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub green: Green,
    pub psi: PsiSpec,
    pub phi: PhiSpec,
}

impl Factor {
    pub fn new(domain: Domain, psi: PsiSpec, phi: PhiSpec) -> Result<Self> {
        domain.validate()?;
        let green = Green::new(domain);
        psi.validate(&green)?;
        phi.validate(domain)?;
        Ok(Factor { green, psi, phi })
    }

    pub fn domain(&self) -> Domain {
        self.green.domain
    }

    pub fn points(&self) -> Vec<C64> {
        self.psi.points()
    }

    /// `ψⱼ = Σₖ p_{j,k} G(·, z_{j,k})`.
    pub fn psi_at(&self, z: C64) -> f64 {
        self.psi.eval(&self.green, z)
    }

    /// `(Σₖ p_{j,k} ∂G/∂v)⁻¹ e^{−φⱼ}` on `∂Dⱼ`; with `reduced` the divisor
    /// polynomial of φⱼ is taken out of `e^{−φⱼ}`.
    pub fn boundary_weight(&self, c: Component, theta: f64, reduced: bool) -> f64 {
        let z = self.domain().boundary_point(c, theta);
        let phi = if reduced {
            self.phi.reduced(&self.green, z)
        } else {
            self.phi.eval(&self.green, z)
        };
        (-phi).exp() / self.psi.normal_derivative(&self.green, c, theta)
    }
}

/// `M = Πⱼ Dⱼ` with `ψ = maxⱼ ψⱼ` and `φ = Σⱼ φⱼ`.
///
/// A single factor is accepted as the degenerate product.
#[derive(Clone, Debug)]
pub struct ProductDomain {
    pub factors: Vec<Factor>,
}

impl ProductDomain {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("product needs at least one factor".into()));
        }
        Ok(ProductDomain { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// Multi-indices `β` of the grid `Z₀ = Πⱼ Zⱼ`, last factor fastest.
    pub fn grid(&self) -> Vec<Vec<usize>> {
        let sizes: Vec<usize> = self.factors.iter().map(|f| f.psi.poles.len()).collect();
        multi_indices(&sizes)
    }

    pub fn point(&self, beta: &[usize]) -> Vec<C64> {
        beta.iter().zip(&self.factors).map(|(&b, f)| f.psi.poles[b].z).collect()
    }

    pub fn p_at(&self, beta: &[usize]) -> Vec<f64> {
        beta.iter().zip(&self.factors).map(|(&b, f)| f.psi.poles[b].p).collect()
    }

    pub fn psi(&self, w: &[C64]) -> f64 {
        self.factors
            .iter()
            .zip(w)
            .map(|(f, &z)| f.psi_at(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn phi(&self, w: &[C64]) -> f64 {
        self.factors.iter().zip(w).map(|(f, &z)| f.phi.eval(&f.green, z)).sum()
    }

    fn check_beta(&self, beta: &[usize], alpha: &[u32]) -> Result<()> {
        if beta.len() != self.dim() || alpha.len() != self.dim() {
            return Err(Error::InvalidInput(
                "multi-index length differs from the dimension".into(),
            ));
        }
        for (j, (&b, f)) in beta.iter().zip(&self.factors).enumerate() {
            if b >= f.psi.poles.len() {
                return Err(Error::InvalidInput(format!(
                    "grid index {b} out of range in factor {j}"
                )));
            }
        }
        Ok(())
    }
}

/// All multi-indices below `sizes`, last index fastest.
pub(crate) fn multi_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// Exponent sets of the monomial ideal `I(2ψ)` at a grid point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaircaseSets {
    /// Minimal generators of `{α : Σ(αⱼ+1)/pⱼ > 1}`.
    pub generators: Vec<Vec<u32>>,
    /// `E_β = {α : Σ(αⱼ+1)/pⱼ = 1}`.
    pub boundary: Vec<Vec<u32>>,
    /// `{α : Σ(αⱼ+1)/pⱼ ≤ 1}`, the coefficients fixed by the ideal.
    pub complement: Vec<Vec<u32>>,
}

impl StaircaseSets {
    pub fn in_ideal(&self, alpha: &[u32]) -> bool {
        !self.complement.iter().any(|a| a == alpha)
    }
}

/// `Σ(αⱼ+1)/pⱼ − 1` compared exactly; `p` is converted to rationals first.
pub fn ideal_staircase(p: &[f64]) -> Result<StaircaseSets> {
    if p.is_empty() {
        return Err(Error::InvalidInput("empty pole-weight vector".into()));
    }
    let mut rp = vec![];
    for &x in p {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidInput(format!("pole weight must be positive, got {x}")));
        }
        let r = Ratio::<i64>::approximate_float(x)
            .ok_or_else(|| Error::InvalidInput(format!("pole weight {x} has no rational form")))?;
        rp.push(Ratio::new(*r.numer() as i128, *r.denom() as i128));
    }
    let level = |a: &[u32]| -> std::cmp::Ordering {
        let s: Ratio<i128> = a
            .iter()
            .zip(&rp)
            .map(|(&ai, pi)| Ratio::from_integer(ai as i128 + 1) / pi)
            .sum();
        s.cmp(&Ratio::from_integer(1))
    };
    let caps: Vec<usize> = p.iter().map(|x| x.ceil() as usize + 1).collect();
    let mut sets = StaircaseSets {
        generators: vec![],
        boundary: vec![],
        complement: vec![],
    };
    let all: Vec<Vec<u32>> = multi_indices(&caps)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as u32).collect())
        .collect();
    for a in &all {
        match level(a) {
            std::cmp::Ordering::Greater => {}
            std::cmp::Ordering::Equal => {
                sets.boundary.push(a.clone());
                sets.complement.push(a.clone());
            }
            std::cmp::Ordering::Less => sets.complement.push(a.clone()),
        }
    }
    for a in &all {
        if level(a) != std::cmp::Ordering::Greater {
            continue;
        }
        let minimal = (0..a.len()).filter(|&j| a[j] > 0).all(|j| {
            let mut b = a.clone();
            b[j] -= 1;
            level(&b) != std::cmp::Ordering::Greater
        });
        if minimal {
            sets.generators.push(a.clone());
        }
    }
    Ok(sets)
}

/// Taylor coefficient `[w^α] f` at `z_β` fixed to `value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub beta: Vec<usize>,
    pub alpha: Vec<u32>,
    pub value: C64,
}

/// Ideals `J_β` at the grid points together with the target germ `f₀`.
#[derive(Clone, Debug, PartialEq)]
pub enum IdealSpec {
    /// Maximal ideals with values `h₀(z_β)`, β in [`ProductDomain::grid`] order.
    Maximal(Vec<C64>),
    /// Maximal ideals with `h₀ = Πⱼ hⱼ`; `hⱼ` is listed at the points of factor `j`.
    ProductValues(Vec<Vec<C64>>),
    /// `J_β = I(2ψ)_{z_β}`; entries give the nonzero coefficients `d_{β,α}` of `f₀`.
    Staircase(Vec<Constraint>),
    /// Explicit Taylor-coefficient constraints.
    Jets(Vec<Constraint>),
}

impl IdealSpec {
    pub fn constraints(&self, m: &ProductDomain) -> Result<Vec<Constraint>> {
        let grid = m.grid();
        let zero_alpha = vec![0u32; m.dim()];
        match self {
            IdealSpec::Maximal(values) => {
                if values.len() != grid.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} values for {} grid points",
                        values.len(),
                        grid.len()
                    )));
                }
                Ok(grid
                    .into_iter()
                    .zip(values)
                    .map(|(beta, &value)| Constraint {
                        beta,
                        alpha: zero_alpha.clone(),
                        value,
                    })
                    .collect())
            }
            IdealSpec::ProductValues(h) => {
                if h.len() != m.dim() || h.iter().zip(&m.factors).any(|(hj, f)| hj.len() != f.psi.poles.len()) {
                    return Err(Error::InvalidInput(
                        "factor values do not match the factor points".into(),
                    ));
                }
                Ok(grid
                    .into_iter()
                    .map(|beta| {
                        let value = beta.iter().zip(h).map(|(&b, hj)| hj[b]).product();
                        Constraint {
                            beta,
                            alpha: zero_alpha.clone(),
                            value,
                        }
                    })
                    .collect())
            }
            IdealSpec::Staircase(germ) => {
                let mut out = vec![];
                for beta in grid {
                    let sets = ideal_staircase(&m.p_at(&beta))?;
                    for g in germ.iter().filter(|g| g.beta == beta) {
                        m.check_beta(&g.beta, &g.alpha)?;
                        if sets.in_ideal(&g.alpha) {
                            return Err(Error::InvalidInput(format!(
                                "exponent {:?} lies in the ideal at {:?}",
                                g.alpha, g.beta
                            )));
                        }
                    }
                    for alpha in sets.complement {
                        let value = germ
                            .iter()
                            .filter(|g| g.beta == beta && g.alpha == alpha)
                            .map(|g| g.value)
                            .sum();
                        out.push(Constraint {
                            beta: beta.clone(),
                            alpha,
                            value,
                        });
                    }
                }
                for g in germ {
                    m.check_beta(&g.beta, &g.alpha)?;
                }
                Ok(out)
            }
            IdealSpec::Jets(list) => {
                for c in list {
                    m.check_beta(&c.beta, &c.alpha)?;
                }
                Ok(list.clone())
            }
        }
    }

    /// Same ideals with the target germ multiplied by `s`.
    pub fn scaled(&self, s: C64) -> Self {
        let sc = |v: &[Constraint]| -> Vec<Constraint> {
            v.iter()
                .map(|c| Constraint {
                    value: c.value * s,
                    ..c.clone()
                })
                .collect()
        };
        match self {
            IdealSpec::Maximal(v) => IdealSpec::Maximal(v.iter().map(|x| x * s).collect()),
            IdealSpec::ProductValues(h) => {
                let mut h = h.clone();
                for x in &mut h[0] {
                    *x *= s;
                }
                IdealSpec::ProductValues(h)
            }
            IdealSpec::Staircase(v) => IdealSpec::Staircase(sc(v)),
            IdealSpec::Jets(v) => IdealSpec::Jets(sc(v)),
        }
    }
}
