//! Non-compact orientable Euclidean cone 3-manifolds with cone angles at
//! most `π`: souls, the local-model catalogue, Gauss–Bonnet checks, normal
//! bundle volumes and the a/b/c split of Margulis neighbourhoods.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EuclideanError {
    #[error("cone angle {0} outside (0, π]")]
    Angle(f64),
    #[error("{field} must be positive and finite, got {value}")]
    Metric { field: &'static str, value: f64 },
    #[error("soul is not Euclidean: orbifold Euler characteristic {0}")]
    NotEuclidean(f64),
    #[error("sphere soul needs three cone points or four of angle π, got {0:?}")]
    ConeData(Vec<f64>),
    #[error("missing metric data: {0}")]
    MissingMetric(&'static str),
    #[error("ν must lie in (0, 1], got {0}")]
    Nu(f64),
    #[error("D must exceed 1, got {0}")]
    BigD(f64),
    #[error("ε must lie in (0, 1/2), got {0}")]
    Epsilon(f64),
    #[error("max(Inj(x), d(f(x), S), Diam(S)) = {value} exceeds ν/D = {bound}")]
    Uncertified { value: f64, bound: f64 },
}

/// Underlying 2-orbifold base for Gauss–Bonnet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbifoldBase {
    Sphere,
    DiskSilvered,
    Torus,
    Klein,
    ProjectivePlane,
    AnnulusSilvered,
    MoebiusSilvered,
}

impl OrbifoldBase {
    pub fn euler_characteristic(self) -> f64 {
        match self {
            OrbifoldBase::Sphere => 2.0,
            OrbifoldBase::DiskSilvered | OrbifoldBase::ProjectivePlane => 1.0,
            OrbifoldBase::Torus
            | OrbifoldBase::Klein
            | OrbifoldBase::AnnulusSilvered
            | OrbifoldBase::MoebiusSilvered => 0.0,
        }
    }
}

fn check_angle(a: f64) -> Result<f64, EuclideanError> {
    if a > 0.0 && a <= PI + ANGLE_TOL {
        Ok(a)
    } else {
        Err(EuclideanError::Angle(a))
    }
}

/// `χ(base) − Σ (1 − αᵢ/2π)` over interior cone points.
pub fn orbifold_euler(angles: &[f64], base: OrbifoldBase) -> Result<f64, EuclideanError> {
    let mut chi = base.euler_characteristic();
    for &a in angles {
        chi -= 1.0 - check_angle(a)? / TAU;
    }
    Ok(chi)
}

/// Triples `p₁ ≤ p₂ ≤ p₃` with `1/p₁ + 1/p₂ + 1/p₃ = 1`, by exhaustive
/// integer search up to 100.
pub fn euclidean_triples() -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 2..=100u64 {
        for b in a..=100 {
            for c in b..=100 {
                if b * c + a * c + a * b == a * b * c {
                    out.push([a as u32, b as u32, c as u32]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SoulKind {
    Point,
    SingularPoint {
        alpha: f64,
    },
    /// `fiber_angle` absent for a non-singular circle.
    Circle {
        #[serde(default)]
        fiber_angle: Option<f64>,
    },
    SilveredInterval,
    Torus,
    SphereWithCones {
        angles: Vec<f64>,
    },
    KleinBottle,
    ProjectivePlaneTwoCones,
    DiskTwoConesSilvered,
    AnnulusSilvered,
    MoebiusSilvered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoulDescriptor {
    #[serde(flatten)]
    pub kind: SoulKind,
    /// Length of a one-dimensional soul.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// Area of a two-dimensional soul.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    /// Intrinsic diameter, if known beyond what `length` implies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
}

impl SoulDescriptor {
    pub fn new(kind: SoulKind) -> Self {
        SoulDescriptor {
            kind,
            length: None,
            area: None,
            diameter: None,
        }
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = Some(length);
        self
    }

    pub fn with_area(mut self, area: f64) -> Self {
        self.area = Some(area);
        self
    }

    pub fn with_diameter(mut self, diameter: f64) -> Self {
        self.diameter = Some(diameter);
        self
    }

    pub fn dim(&self) -> u8 {
        match self.kind {
            SoulKind::Point | SoulKind::SingularPoint { .. } => 0,
            SoulKind::Circle { .. } | SoulKind::SilveredInterval => 1,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<(), EuclideanError> {
        for (field, v) in [
            ("length", self.length),
            ("area", self.area),
            ("diameter", self.diameter),
        ] {
            if let Some(value) = v {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(EuclideanError::Metric { field, value });
                }
            }
        }
        match &self.kind {
            SoulKind::SingularPoint { alpha } => {
                check_angle(*alpha)?;
            }
            SoulKind::Circle { fiber_angle: Some(a) } => {
                check_angle(*a)?;
            }
            SoulKind::SphereWithCones { angles } => {
                for &a in angles {
                    check_angle(a)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Explicit diameter, else the one implied by the length; points have 0.
    pub fn diameter(&self) -> Option<f64> {
        self.diameter.or(match self.kind {
            SoulKind::Point | SoulKind::SingularPoint { .. } => Some(0.0),
            SoulKind::Circle { .. } => self.length.map(|l| l / 2.0),
            SoulKind::SilveredInterval => self.length,
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalModelName {
    R3,
    R3Alpha,
    S1TwistR2,
    S1TwistConeDisk,
    Pillow,
    T2xR,
    S2abcxR,
    S24pixR,
    K2TwistR,
    P2PiPiTwistR,
    QuotS24piD2PiPi,
    QuotT2Annulus,
    QuotK2Moebius,
}

impl LocalModelName {
    pub const ALL: [LocalModelName; 13] = [
        LocalModelName::R3,
        LocalModelName::R3Alpha,
        LocalModelName::S1TwistR2,
        LocalModelName::S1TwistConeDisk,
        LocalModelName::Pillow,
        LocalModelName::T2xR,
        LocalModelName::S2abcxR,
        LocalModelName::S24pixR,
        LocalModelName::K2TwistR,
        LocalModelName::P2PiPiTwistR,
        LocalModelName::QuotS24piD2PiPi,
        LocalModelName::QuotT2Annulus,
        LocalModelName::QuotK2Moebius,
    ];

    pub fn notation(self) -> &'static str {
        match self {
            LocalModelName::R3 => "R^3",
            LocalModelName::R3Alpha => "R^3(alpha)",
            LocalModelName::S1TwistR2 => "S^1 x~ R^2",
            LocalModelName::S1TwistConeDisk => "S^1 x~ (open cone disk)",
            LocalModelName::Pillow => "pillow",
            LocalModelName::T2xR => "T^2 x R",
            LocalModelName::S2abcxR => "S^2(a,b,c) x R",
            LocalModelName::S24pixR => "S^2(pi,pi,pi,pi) x R",
            LocalModelName::K2TwistR => "K^2 x~ R",
            LocalModelName::P2PiPiTwistR => "P^2(pi,pi) x~ R",
            LocalModelName::QuotS24piD2PiPi => "(S^2(pi,pi,pi,pi) x R)/involution over D^2(pi,pi)",
            LocalModelName::QuotT2Annulus => "(T^2 x R)/involution over silvered annulus",
            LocalModelName::QuotK2Moebius => "(K^2 x~ R)/involution over silvered Moebius strip",
        }
    }

    pub fn group(self) -> &'static str {
        match self {
            LocalModelName::R3 | LocalModelName::R3Alpha => "point soul",
            LocalModelName::S1TwistR2 | LocalModelName::S1TwistConeDisk | LocalModelName::Pillow => {
                "one-dimensional soul"
            }
            LocalModelName::T2xR | LocalModelName::S2abcxR | LocalModelName::S24pixR => "product over a surface",
            LocalModelName::K2TwistR | LocalModelName::P2PiPiTwistR => "twisted line bundle",
            LocalModelName::QuotS24piD2PiPi | LocalModelName::QuotT2Annulus | LocalModelName::QuotK2Moebius => {
                "quotient by an involution"
            }
        }
    }

    /// Double cover of a quotient model.
    pub fn double_cover(self) -> Option<LocalModelName> {
        match self {
            LocalModelName::Pillow => Some(LocalModelName::S1TwistR2),
            LocalModelName::QuotS24piD2PiPi => Some(LocalModelName::S24pixR),
            LocalModelName::QuotT2Annulus => Some(LocalModelName::T2xR),
            LocalModelName::QuotK2Moebius => Some(LocalModelName::K2TwistR),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalModel {
    pub name: LocalModelName,
    pub soul: SoulDescriptor,
}

impl LocalModel {
    /// The covering model and its soul, whose metric data doubles.
    pub fn double_cover(&self) -> Option<LocalModel> {
        let name = self.name.double_cover()?;
        let kind = match name {
            LocalModelName::S1TwistR2 => SoulKind::Circle { fiber_angle: None },
            LocalModelName::S24pixR => SoulKind::SphereWithCones { angles: vec![PI; 4] },
            LocalModelName::T2xR => SoulKind::Torus,
            _ => SoulKind::KleinBottle,
        };
        Some(LocalModel {
            name,
            soul: SoulDescriptor {
                kind,
                length: self.soul.length.map(|l| 2.0 * l),
                area: self.soul.area.map(|a| 2.0 * a),
                diameter: None,
            },
        })
    }
}

pub fn classify_soul(s: &SoulDescriptor) -> Result<LocalModel, EuclideanError> {
    s.validate()?;
    let name = match &s.kind {
        SoulKind::Point => LocalModelName::R3,
        SoulKind::SingularPoint { .. } => LocalModelName::R3Alpha,
        SoulKind::Circle { fiber_angle: None } => LocalModelName::S1TwistR2,
        SoulKind::Circle { fiber_angle: Some(_) } => LocalModelName::S1TwistConeDisk,
        SoulKind::SilveredInterval => LocalModelName::Pillow,
        SoulKind::Torus => LocalModelName::T2xR,
        SoulKind::SphereWithCones { angles } => {
            let chi = orbifold_euler(angles, OrbifoldBase::Sphere)?;
            if chi.abs() > 1e-9 {
                return Err(EuclideanError::NotEuclidean(chi));
            }
            match angles.len() {
                3 => LocalModelName::S2abcxR,
                4 if angles.iter().all(|a| (a - PI).abs() <= 1e-9) => LocalModelName::S24pixR,
                _ => return Err(EuclideanError::ConeData(angles.clone())),
            }
        }
        SoulKind::KleinBottle => LocalModelName::K2TwistR,
        SoulKind::ProjectivePlaneTwoCones => LocalModelName::P2PiPiTwistR,
        SoulKind::DiskTwoConesSilvered => LocalModelName::QuotS24piD2PiPi,
        SoulKind::AnnulusSilvered => LocalModelName::QuotT2Annulus,
        SoulKind::MoebiusSilvered => LocalModelName::QuotK2Moebius,
    };
    Ok(LocalModel { name, soul: s.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MargulisType {
    A,
    B,
    C,
    Excluded,
}

pub fn margulis_type(m: LocalModelName) -> MargulisType {
    use LocalModelName::*;
    match m {
        T2xR | S1TwistR2 | S1TwistConeDisk => MargulisType::A,
        S2abcxR | S24pixR | Pillow => MargulisType::B,
        P2PiPiTwistR | QuotS24piD2PiPi => MargulisType::C,
        K2TwistR | QuotT2Annulus | QuotK2Moebius | R3 | R3Alpha => MargulisType::Excluded,
    }
}

/// Euclidean volume of the radius-`ν` normal cone bundle of the soul.
pub fn tube_volume(m: &LocalModel, nu: f64) -> Result<f64, EuclideanError> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(EuclideanError::Metric { field: "nu", value: nu });
    }
    let s = &m.soul;
    Ok(match &s.kind {
        SoulKind::Point => 4.0 / 3.0 * PI * nu.powi(3),
        SoulKind::SingularPoint { alpha } => alpha / TAU * 4.0 / 3.0 * PI * nu.powi(3),
        SoulKind::Circle { fiber_angle } => {
            let l = s.length.ok_or(EuclideanError::MissingMetric("length"))?;
            l * fiber_angle.unwrap_or(TAU) / TAU * PI * nu * nu
        }
        SoulKind::SilveredInterval => {
            let l = s.length.ok_or(EuclideanError::MissingMetric("length"))?;
            l * PI * nu * nu
        }
        _ => 2.0 * s.area.ok_or(EuclideanError::MissingMetric("area"))? * nu,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MargulisNeighborhood {
    pub model: LocalModel,
    pub nu: f64,
    #[serde(rename = "D")]
    pub big_d: f64,
    pub epsilon: f64,
    /// `max(Inj(x), d(f(x), S))` as certified by the caller.
    pub local_scale: f64,
}

impl MargulisNeighborhood {
    pub fn new(model: LocalModel, nu: f64, big_d: f64, epsilon: f64, local_scale: f64) -> Result<Self, EuclideanError> {
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(EuclideanError::Nu(nu));
        }
        if !(big_d > 1.0 && big_d.is_finite()) {
            return Err(EuclideanError::BigD(big_d));
        }
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(EuclideanError::Epsilon(epsilon));
        }
        let diam = model.soul.diameter().ok_or(EuclideanError::MissingMetric("diameter"))?;
        let value = local_scale.max(diam);
        let bound = nu / big_d;
        if value > bound * (1.0 + 1e-12) {
            return Err(EuclideanError::Uncertified { value, bound });
        }
        Ok(MargulisNeighborhood {
            model,
            nu,
            big_d,
            epsilon,
            local_scale,
        })
    }

    pub fn tube_volume(&self) -> Result<f64, EuclideanError> {
        tube_volume(&self.model, self.nu)
    }

    /// `πν³/D`.
    pub fn tube_bound(&self) -> f64 {
        PI * self.nu.powi(3) / self.big_d
    }

    pub fn margulis_type(&self) -> MargulisType {
        margulis_type(self.model.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub name: LocalModelName,
    pub notation: &'static str,
    pub group: &'static str,
    pub soul_dim: u8,
    pub margulis_type: MargulisType,
    pub double_cover: Option<LocalModelName>,
}

pub fn catalogue() -> Vec<CatalogueEntry> {
    LocalModelName::ALL
        .iter()
        .map(|&name| CatalogueEntry {
            name,
            notation: name.notation(),
            group: name.group(),
            soul_dim: match name {
                LocalModelName::R3 | LocalModelName::R3Alpha => 0,
                LocalModelName::S1TwistR2 | LocalModelName::S1TwistConeDisk | LocalModelName::Pillow => 1,
                _ => 2,
            },
            margulis_type: margulis_type(name),
            double_cover: name.double_cover(),
        })
        .collect()
}
