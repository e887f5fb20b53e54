//! JSON schema of structure files.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::group::GroupSpec;
use crate::space::Point;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub schema_version: u32,
    pub name: String,
    pub group: GroupSpec,
    pub domains: Vec<DomainDecl>,
    /// Lazily generated conjugate families (free-factor-conjugate projections).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyDecl>,
    #[serde(default)]
    pub relations: Vec<RelationDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho: Vec<RhoDecl>,
    pub action: ActionRule,
    pub constants: Constants,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDecl {
    pub id: usize,
    pub label: String,
    pub space: SpaceSpec,
    pub projection: ProjectionRule,
}

/// The cosets `r·A_factor` of a free factor, one domain each, nested in
/// `nested_in` and pairwise transverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDecl {
    pub label: String,
    pub factor: usize,
    pub nested_in: String,
    pub space: SpaceSpec,
    pub generation_radius: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Cayley tree of the whole (free) model, or of free factor `factor`.
    CayleyTree {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factor: Option<usize>,
    },
    Line,
    BoundedPoint,
    ExplicitGraph {
        nodes: usize,
        edges: Vec<[usize; 2]>,
        basepoint: usize,
    },
    BassSerreTree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProjectionRule {
    /// The element itself, read as a point of the space (tree vertex,
    /// integer, or Bass–Serre element vertex).
    Identity,
    /// Component in a direct-product factor, or coordinate of a free abelian group.
    ProductFactor { factor: usize },
    /// Every element projects to one point (the basepoint when omitted).
    Constant {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<Point>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// The first domain is nested in the second.
    Nested,
    Orthogonal,
    Transverse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDecl {
    pub pair: [String; 2],
    pub relation: RelationKind,
}

/// Override of `ρ^from_to`, a point of the space of `to`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoDecl {
    pub from: String,
    pub to: String,
    pub point: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionRule {
    /// Single-domain structures: every element fixes the domain and acts by
    /// left multiplication (a shift on a line).
    LeftMultiplication,
    /// Every domain is fixed; elements act through their factor components.
    Product,
    /// Listed domains are fixed; conjugate families are translated.
    FreeProduct,
    /// Group `Z`: the generator rotates `cycle` and shifts each line by `shift`.
    CyclicPermutation { cycle: Vec<String>, shift: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaEntry {
    pub kappa: f64,
    pub theta_u: f64,
}

/// Declared hierarchy constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub delta: f64,
    pub xi: f64,
    pub kappa0: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub lambda_llink: f64,
    pub alpha: f64,
    #[serde(rename = "K_proj")]
    pub k_proj: f64,
    pub complexity_n: usize,
    pub theta_u_table: Vec<ThetaEntry>,
    pub theta_e: f64,
    pub tau0: f64,
    /// Normalization constant: every space is the `C`-neighbourhood of its projection image.
    #[serde(rename = "C")]
    pub normalization_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3: Option<u64>,
}

impl Constants {
    /// `D = max{δ, ξ, κ₀, n, E}`.
    pub fn d(&self) -> f64 {
        [
            self.delta,
            self.xi,
            self.kappa0,
            self.complexity_n as f64,
            self.e,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `κ₁ = max{C, κ₀, ξ}`.
    pub fn kappa1(&self) -> f64 {
        self.normalization_c.max(self.kappa0).max(self.xi)
    }

    /// `θ_u(κ)`: the entry with the smallest tabulated `κ' ≥ κ`.
    pub fn theta_u(&self, kappa: f64) -> Option<f64> {
        self.theta_u_table
            .iter()
            .filter(|t| t.kappa >= kappa)
            .min_by(|a, b| a.kappa.total_cmp(&b.kappa))
            .map(|t| t.theta_u)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let named = [
            ("delta", self.delta),
            ("xi", self.xi),
            ("kappa0", self.kappa0),
            ("E", self.e),
            ("lambda_llink", self.lambda_llink),
            ("alpha", self.alpha),
            ("K_proj", self.k_proj),
            ("theta_e", self.theta_e),
            ("C", self.normalization_c),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(LabError::Input(format!(
                    "constant {name} must be a finite nonnegative number"
                )));
            }
        }
        if !(self.tau0.is_finite() && self.tau0 > 0.0) {
            return Err(LabError::Input("constant tau0 must be positive".into()));
        }
        if self
            .theta_u_table
            .iter()
            .any(|t| !(t.kappa >= 0.0 && t.theta_u >= 0.0))
        {
            return Err(LabError::Input(
                "theta_u_table entries must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

impl StructureFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StructureFile = serde_json::from_str(text).map_err(|e| LabError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(LabError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure files serialize")
    }
}
