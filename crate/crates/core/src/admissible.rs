//! Admissible mappings `a -> T_a`: additive, with `T_a` irreducible for every `a != 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{gcd_u128, pow_u128, FieldCtx, Fq, Frob};
use crate::semilinear::{is_irreducible_oracle, projective_polynomial_root, SemilinearMap, SemilinearSpec};

/// Exhaustive oracle cross-check runs up to this field order.
pub const ORACLE_LIMIT: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `T_a = a T`.
    Trivial { t: SemilinearMap },
    /// `M_a = [[0, aα], [a^τ, 0]]`.
    Diag { tau: Frob, alpha: Fq },
    /// `M_a = [[0, aα], [a^(σ²), a^σ β]]`.
    Triang { alpha: Fq, beta: Fq },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleFamily {
    sigma: Frob,
    variant: Variant,
}

/// JSON descriptor, e.g. `{"variant":"diag","k":1,"l":2,"alpha":5}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum FamilyDescriptor {
    Trivial { t: SemilinearSpec },
    Diag { k: u32, l: u32, alpha: u32 },
    Triang { k: u32, alpha: u32, beta: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub reason: String,
    /// Exhaustive verdict, when the field is small enough to run it.
    pub oracle: Option<bool>,
}

impl AdmissibleFamily {
    pub fn trivial(ctx: &FieldCtx, t: SemilinearMap) -> Result<AdmissibleFamily> {
        if !is_irreducible_oracle(ctx, &t) {
            return Err(Error::Parameter("trivial admissible mapping needs an irreducible T".into()));
        }
        Ok(AdmissibleFamily { sigma: t.sigma(), variant: Variant::Trivial { t } })
    }

    pub fn diag(ctx: &FieldCtx, sigma: Frob, tau: Frob, alpha: Fq) -> Result<AdmissibleFamily> {
        ctx.check(alpha)?;
        Ok(AdmissibleFamily { sigma, variant: Variant::Diag { tau, alpha } })
    }

    pub fn triang(ctx: &FieldCtx, sigma: Frob, alpha: Fq, beta: Fq) -> Result<AdmissibleFamily> {
        ctx.check(alpha)?;
        ctx.check(beta)?;
        Ok(AdmissibleFamily { sigma, variant: Variant::Triang { alpha, beta } })
    }

    pub fn from_descriptor(ctx: &FieldCtx, d: &FamilyDescriptor) -> Result<AdmissibleFamily> {
        match d {
            FamilyDescriptor::Trivial { t } => Self::trivial(ctx, SemilinearMap::from_spec(ctx, t)?),
            FamilyDescriptor::Diag { k, l, alpha } => {
                Self::diag(ctx, ctx.frob_k(*k as i64), ctx.frob_k(*l as i64), Fq(*alpha))
            }
            FamilyDescriptor::Triang { k, alpha, beta } => {
                Self::triang(ctx, ctx.frob_k(*k as i64), Fq(*alpha), Fq(*beta))
            }
        }
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        match self.variant {
            Variant::Trivial { t } => FamilyDescriptor::Trivial { t: t.spec() },
            Variant::Diag { tau, alpha } => FamilyDescriptor::Diag { k: self.sigma.k(), l: tau.k(), alpha: alpha.0 },
            Variant::Triang { alpha, beta } => {
                FamilyDescriptor::Triang { k: self.sigma.k(), alpha: alpha.0, beta: beta.0 }
            }
        }
    }

    pub fn sigma(&self) -> Frob {
        self.sigma
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    /// A diagonal family with τ = id is a trivial family in disguise.
    pub fn is_trivial_equivalent(&self) -> bool {
        matches!(self.variant, Variant::Diag { tau, .. } if tau.is_identity())
    }

    /// Matrix of `T_a`; the zero matrix at `a = 0`.
    pub fn matrix_at(&self, ctx: &FieldCtx, a: Fq) -> [Fq; 4] {
        match self.variant {
            Variant::Trivial { t } => t.matrix().map(|x| ctx.mul(a, x)),
            Variant::Diag { tau, alpha } => [Fq::ZERO, ctx.mul(a, alpha), ctx.frob(tau, a), Fq::ZERO],
            Variant::Triang { alpha, beta } => {
                let s2 = self.sigma.compose(self.sigma);
                [Fq::ZERO, ctx.mul(a, alpha), ctx.frob(s2, a), ctx.mul(ctx.frob(self.sigma, a), beta)]
            }
        }
    }

    /// `T_a` as a semilinear map; `None` when it is zero or singular.
    pub fn eval_at(&self, ctx: &FieldCtx, a: Fq) -> Option<SemilinearMap> {
        SemilinearMap::new(ctx, self.matrix_at(ctx, a), self.sigma).ok()
    }

    /// Closed-form admissibility, cross-checked against the exhaustive oracle on small fields.
    pub fn is_admissible(&self, ctx: &FieldCtx) -> Result<AdmissibilityReport> {
        let (admissible, reason) = self.closed_form(ctx)?;
        let oracle = (ctx.order() <= ORACLE_LIMIT).then(|| self.oracle(ctx));
        if let Some(o) = oracle {
            if o != admissible {
                return Err(Error::Consistency(format!(
                    "admissibility closed form says {admissible} ({reason}) but the oracle says {o}"
                )));
            }
        }
        Ok(AdmissibilityReport { admissible, reason, oracle })
    }

    /// Every `T_a`, `a != 0`, is invertible and has no invariant line.
    pub fn oracle(&self, ctx: &FieldCtx) -> bool {
        ctx.nonzero().all(|a| self.eval_at(ctx, a).is_some_and(|t| is_irreducible_oracle(ctx, &t)))
    }

    fn closed_form(&self, ctx: &FieldCtx) -> Result<(bool, String)> {
        match self.variant {
            Variant::Trivial { t } => {
                let irr = is_irreducible_oracle(ctx, &t);
                Ok((irr, format!("T is {}", if irr { "irreducible" } else { "reducible" })))
            }
            Variant::Diag { tau, alpha } => {
                if alpha.is_zero() {
                    return Ok((false, "α = 0 makes every T_a singular".into()));
                }
                let d = diag_power_index(ctx.p(), ctx.m(), self.sigma.k(), tau.k());
                let idx = ctx.power_class_index(alpha, d)?;
                Ok((idx != 0, format!("α has index {idx} modulo the {d}-th powers")))
            }
            Variant::Triang { alpha, beta } => match projective_polynomial_root(ctx, self.sigma, alpha, beta) {
                None => Ok((true, "X^(σ+1) - βX - α has no roots in L".into())),
                Some(r) => Ok((false, format!("X^(σ+1) - βX - α has the root {}", r.0))),
            },
        }
    }

    /// The printed case split of the diagonal criterion, for comparison with [`Self::is_admissible`].
    pub fn diag_case_split(&self, ctx: &FieldCtx) -> Option<bool> {
        let Variant::Diag { tau, alpha } = self.variant else {
            return None;
        };
        if alpha.is_zero() {
            return Some(false);
        }
        let (m, k, l) = (ctx.m() as u64, self.sigma.k() as u64, tau.k() as u64);
        let g = crate::gf::gcd_u64(m, l);
        let gk = crate::gf::gcd_u64(g, k);
        let odd = (g / gk) % 2 == 1;
        let nonsquare = ctx.p() != 2 && !ctx.is_power(alpha, 2).ok()?;
        let first = nonsquare && (k == 0 || odd);
        let second = k != 0 && !odd && !ctx.is_power(alpha, ctx.p().pow(gk as u32) as u64 + 1).ok()?;
        Some(first || second)
    }
}

/// `d = gcd(p^k + 1, p^l - 1, p^m - 1)`; the subgroup `L^(σ+1) L^(τ-1)` is the d-th powers.
pub fn diag_power_index(p: u32, m: u32, k: u32, l: u32) -> u64 {
    let q1 = pow_u128(p as u64, m) - 1;
    let a = pow_u128(p as u64, k) + 1;
    let b = pow_u128(p as u64, l) - 1;
    gcd_u128(gcd_u128(a, b), q1) as u64
}
