//! Scenario files. A scenario names its spaces and extensions over one group
//! and subgroup, then lists the checks to run in order.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::check::Strategy;
use crate::coset::{enumerate_cosets, CosetTable, SubgroupHandle};
use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::measure::AtomRecord;
use crate::perm::Perm;
use crate::schreier::{schreier_basis, SchreierBasis};
use crate::space::{BoundarySpace, FiniteExtension, FiniteSpace, InducedProjection, InducedSpace};
use crate::word::Word;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupDecl,
    #[serde(default)]
    pub subgroup: Vec<Word>,
    pub depths: Depths,
    pub budgets: Budgets,
    pub seed: u64,
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceDecl>,
    #[serde(default)]
    pub extensions: BTreeMap<String, ExtensionDecl>,
    pub checks: Vec<CheckDecl>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDecl {
    Free { rank: usize },
    Permutation { degree: usize, generators: Vec<Vec<usize>> },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Depths {
    /// Cylinder depth `d` for coverage checks.
    pub cylinder: usize,
    /// Target concentration depth `m` for contraction.
    pub target: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    pub ball: usize,
    pub steps: usize,
    pub samples: usize,
    pub atoms: usize,
    pub max_cosets: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberAction {
    #[default]
    Schreier,
    /// Every group element fixes the fiber coordinate (control runs).
    Disabled,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDecl {
    /// `Γ/Λ`.
    CosetSpace,
    /// Explicit permutations of `{0..n-1}`, one per generator.
    Finite { generators: Vec<Vec<usize>> },
    /// Disjoint union of finite spaces.
    Union { parts: Vec<String> },
    /// The boundary of the ambient free group.
    Boundary,
    /// The boundary of Λ, acted on by Λ through its Schreier basis.
    SubgroupBoundary {
        #[serde(default)]
        fiber_action: FiberAction,
    },
    /// `Γ/Λ × ∂Λ` with the cocycle action.
    InducedBoundary {
        #[serde(default)]
        fiber_action: FiberAction,
    },
    /// `Γ/Λ × Z` for a finite Λ-space `Z` (given as a finite Γ-space).
    InducedFinite { fiber: String },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExtensionDecl {
    /// `(i, y) ↦ i` on an induced space.
    Projection {
        space: String,
    },
    /// Explicit map between finite spaces (1-based images).
    FiniteMap {
        source: String,
        target: String,
        map: Vec<usize>,
    },
    Identity {
        space: String,
    },
    /// `X × Z → X` with generator `k` acting on `Z` by `twist[k]`.
    TwistedDouble {
        base: String,
        twist: Vec<Vec<usize>>,
    },
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CheckDecl {
    pub id: String,
    #[serde(flatten)]
    pub kind: CheckKind,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckKind {
    /// Coset table invariants, the cocycle's defining property and both
    /// orders of the cocycle identity, Schreier rank.
    CosetInvariants {
        #[serde(default)]
        radius: Option<usize>,
    },
    MinimalFinite {
        space: String,
    },
    MinimalSymbolic {
        space: String,
        #[serde(default)]
        depth: Option<usize>,
        #[serde(default)]
        radius: Option<usize>,
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        starts: Option<Vec<String>>,
    },
    Contract {
        space: String,
        #[serde(default)]
        strategy: Option<Strategy>,
        #[serde(default)]
        measure: Option<Vec<AtomRecord>>,
        #[serde(default)]
        samples: Option<usize>,
    },
    FiniteContractible {
        space: String,
        measure: Vec<AtomRecord>,
    },
    SpExtension {
        extension: String,
        #[serde(default)]
        strategy: Option<Strategy>,
        #[serde(default)]
        samples: Option<usize>,
    },
    #[serde(rename = "theorem_a_34")]
    TheoremA34 {
        extension: String,
        #[serde(default)]
        strategy: Option<Strategy>,
        #[serde(default)]
        samples: Option<usize>,
    },
    DecomposeFibers {
        extension: String,
        #[serde(default)]
        samples: Option<usize>,
    },
    AmenableSize {
        base: String,
        candidates: Vec<String>,
    },
    IsometryBridge {
        space: String,
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        functions: Option<usize>,
        #[serde(default)]
        max_depth: Option<usize>,
        #[serde(default)]
        radii: Option<Vec<usize>>,
    },
}

impl CheckKind {
    /// The space or extension the check is about.
    pub fn subject(&self) -> Option<&str> {
        match self {
            CheckKind::CosetInvariants { .. } => None,
            CheckKind::MinimalFinite { space }
            | CheckKind::MinimalSymbolic { space, .. }
            | CheckKind::Contract { space, .. }
            | CheckKind::FiniteContractible { space, .. }
            | CheckKind::IsometryBridge { space, .. } => Some(space),
            CheckKind::SpExtension { extension, .. }
            | CheckKind::TheoremA34 { extension, .. }
            | CheckKind::DecomposeFibers { extension, .. } => Some(extension),
            CheckKind::AmenableSize { base, .. } => Some(base),
        }
    }
}

/// A space built from its declaration.
#[derive(Clone, Debug)]
pub enum BuiltSpace {
    Finite(FiniteSpace),
    Boundary(BoundarySpace),
    Induced(InducedSpace<BoundarySpace>),
    /// A flattened `Γ/Λ × Z` with its projection to `Γ/Λ`.
    InducedFinite {
        space: FiniteSpace,
        projection: Vec<usize>,
        base: FiniteSpace,
    },
}

impl BuiltSpace {
    pub fn kind(&self) -> &'static str {
        match self {
            BuiltSpace::Finite(_) | BuiltSpace::InducedFinite { .. } => "finite",
            BuiltSpace::Boundary(_) => "boundary",
            BuiltSpace::Induced(_) => "induced",
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteSpace> {
        match self {
            BuiltSpace::Finite(x) | BuiltSpace::InducedFinite { space: x, .. } => Some(x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum BuiltExtension {
    Induced { source: String, projection: InducedProjection<BoundarySpace> },
    Finite { source: String, extension: FiniteExtension },
}

impl BuiltExtension {
    pub fn source_name(&self) -> &str {
        match self {
            BuiltExtension::Induced { source, .. } | BuiltExtension::Finite { source, .. } => source,
        }
    }
}

/// Everything a scenario declares, constructed and cross-checked.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub group: GroupContext,
    pub table: Option<Arc<CosetTable>>,
    pub basis: Option<Arc<SchreierBasis>>,
    pub spaces: BTreeMap<String, BuiltSpace>,
    pub extensions: BTreeMap<String, BuiltExtension>,
}

fn invalid(field: impl std::fmt::Display, msg: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("{field}: {msg}"))
}

fn perms(field: &str, images: &[Vec<usize>]) -> Result<Vec<Perm>> {
    images.iter().map(|p| Perm::new(p.clone()).map_err(|e| invalid(field, e))).collect()
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("scenario does not parse: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    /// Budget and name checks that do not need any construction.
    pub fn validate(&self) -> Result<()> {
        let b = &self.budgets;
        for (name, v) in [("ball", b.ball), ("steps", b.steps), ("samples", b.samples), ("atoms", b.atoms), ("max_cosets", b.max_cosets)] {
            if v == 0 {
                return Err(invalid(format!("budgets.{name}"), "must be positive"));
            }
        }
        if self.depths.cylinder == 0 || self.depths.target == 0 {
            return Err(invalid("depths", "cylinder and target depths must be positive"));
        }
        let mut ids = std::collections::BTreeSet::new();
        for c in &self.checks {
            if !ids.insert(c.id.as_str()) {
                return Err(invalid(format!("checks.{}", c.id), "duplicate check id"));
            }
            if let Some(subject) = c.kind.subject() {
                let known = match &c.kind {
                    CheckKind::SpExtension { .. } | CheckKind::TheoremA34 { .. } | CheckKind::DecomposeFibers { .. } => {
                        self.extensions.contains_key(subject)
                    }
                    _ => self.spaces.contains_key(subject),
                };
                if !known {
                    return Err(invalid(format!("checks.{}", c.id), format!("unknown name {subject:?}")));
                }
            }
            if let CheckKind::AmenableSize { candidates, .. } = &c.kind {
                if let Some(bad) = candidates.iter().find(|n| !self.extensions.contains_key(*n)) {
                    return Err(invalid(format!("checks.{}", c.id), format!("unknown extension {bad:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Workspace> {
        let group = match &self.group {
            GroupDecl::Free { rank } => GroupContext::free(*rank).map_err(|e| invalid("group.free.rank", e))?,
            GroupDecl::Permutation { degree, generators } => {
                GroupContext::permutation(*degree, perms("group.permutation.generators", generators)?)
                    .map_err(|e| invalid("group.permutation", e))?
            }
        };
        for w in &self.subgroup {
            group.check_word(w).map_err(|e| invalid("subgroup", e))?;
        }
        let needs_table = self.spaces.values().any(|s| {
            matches!(
                s,
                SpaceDecl::CosetSpace
                    | SpaceDecl::SubgroupBoundary { .. }
                    | SpaceDecl::InducedBoundary { .. }
                    | SpaceDecl::InducedFinite { .. }
            )
        }) || self.checks.iter().any(|c| matches!(c.kind, CheckKind::CosetInvariants { .. }));
        let table = if needs_table {
            let sub = SubgroupHandle::new(group.clone(), self.subgroup.clone())?;
            Some(Arc::new(enumerate_cosets(&sub, self.budgets.max_cosets).map_err(|e| invalid("subgroup", e))?))
        } else {
            None
        };
        let basis = match (&table, group.is_free()) {
            (Some(t), true) => Some(Arc::new(schreier_basis(t)?)),
            _ => None,
        };
        let mut ws = Workspace { group, table, basis, spaces: BTreeMap::new(), extensions: BTreeMap::new() };
        // Unions and induced finite spaces refer to other spaces; build in dependency order.
        let mut pending: Vec<(&String, &SpaceDecl)> = self.spaces.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for (name, decl) in pending {
                let deps: Vec<&String> = match decl {
                    SpaceDecl::Union { parts } => parts.iter().collect(),
                    SpaceDecl::InducedFinite { fiber } => vec![fiber],
                    _ => vec![],
                };
                if let Some(missing) = deps.iter().find(|d| !self.spaces.contains_key(d.as_str())) {
                    return Err(invalid(format!("spaces.{name}"), format!("unknown space {missing:?}")));
                }
                if deps.iter().all(|d| ws.spaces.contains_key(d.as_str())) {
                    let built = ws.build_space(name, decl)?;
                    ws.spaces.insert(name.clone(), built);
                } else {
                    rest.push((name, decl));
                }
            }
            if rest.len() == before {
                return Err(invalid("spaces", "cyclic space references"));
            }
            pending = rest;
        }
        for (name, decl) in &self.extensions {
            let built = ws.build_extension(name, decl)?;
            ws.extensions.insert(name.clone(), built);
        }
        self.check_kinds(&ws)?;
        Ok(ws)
    }

    fn check_kinds(&self, ws: &Workspace) -> Result<()> {
        for c in &self.checks {
            let field = format!("checks.{}", c.id);
            let space_kind = |name: &str| ws.spaces[name].kind();
            match &c.kind {
                CheckKind::CosetInvariants { .. } => {}
                CheckKind::MinimalFinite { space }
                | CheckKind::FiniteContractible { space, .. }
                | CheckKind::AmenableSize { base: space, .. } => {
                    if space_kind(space) != "finite" {
                        return Err(invalid(field, format!("{space:?} is not a finite space")));
                    }
                }
                CheckKind::MinimalSymbolic { space, .. } | CheckKind::IsometryBridge { space, .. } => {
                    if space_kind(space) == "finite" {
                        return Err(invalid(field, format!("{space:?} is not a symbolic space")));
                    }
                }
                CheckKind::Contract { space, strategy, .. } => {
                    if space_kind(space) == "finite" {
                        return Err(invalid(field, format!("{space:?} is finite; use finite_contractible")));
                    }
                    if space_kind(space) == "induced" && *strategy == Some(Strategy::AxisPower) {
                        return Err(invalid(field, "axis-power needs a bare boundary; use paper-sequence"));
                    }
                }
                CheckKind::SpExtension { extension, strategy, .. } | CheckKind::TheoremA34 { extension, strategy, .. } => {
                    if matches!(ws.extensions[extension], BuiltExtension::Finite { .. }) && matches!(c.kind, CheckKind::TheoremA34 { .. }) {
                        return Err(invalid(field, "theorem_a_34 needs an induced projection"));
                    }
                    if *strategy == Some(Strategy::AxisPower) {
                        return Err(invalid(field, "axis-power needs a bare boundary; use paper-sequence"));
                    }
                }
                CheckKind::DecomposeFibers { extension, .. } => {
                    if !matches!(ws.extensions[extension], BuiltExtension::Induced { .. }) {
                        return Err(invalid(field, "decompose_fibers needs an induced projection"));
                    }
                }
            }
            if let CheckKind::AmenableSize { base, candidates } = &c.kind {
                for cand in candidates {
                    match &ws.extensions[cand] {
                        BuiltExtension::Finite { extension, .. } if Some(extension.base()) == ws.spaces[base].as_finite() => {}
                        _ => return Err(invalid(&field, format!("candidate {cand:?} is not a finite extension of {base:?}"))),
                    }
                }
            }
        }
        Ok(())
    }
}

use crate::space::Extension;

impl Workspace {
    fn table(&self, field: &str) -> Result<&Arc<CosetTable>> {
        self.table.as_ref().ok_or_else(|| invalid(field, "needs a subgroup"))
    }

    fn finite(&self, field: &str, name: &str) -> Result<&FiniteSpace> {
        self.spaces
            .get(name)
            .and_then(BuiltSpace::as_finite)
            .ok_or_else(|| invalid(field, format!("{name:?} is not a declared finite space")))
    }

    fn subgroup_boundary(&self, field: &str, action: FiberAction) -> Result<BoundarySpace> {
        let table = self.table(field)?.clone();
        let basis = self.basis.clone().ok_or_else(|| invalid(field, "boundary fibers need a free ambient group"))?;
        let y = BoundarySpace::of_subgroup(table, basis).map_err(|e| invalid(field, e))?;
        Ok(match action {
            FiberAction::Schreier => y,
            FiberAction::Disabled => y.with_action_disabled(),
        })
    }

    fn build_space(&self, name: &str, decl: &SpaceDecl) -> Result<BuiltSpace> {
        let field = format!("spaces.{name}");
        Ok(match decl {
            SpaceDecl::CosetSpace => BuiltSpace::Finite(FiniteSpace::from_coset_table(self.table(&field)?)),
            SpaceDecl::Finite { generators } => {
                BuiltSpace::Finite(FiniteSpace::new(self.group.clone(), perms(&field, generators)?).map_err(|e| invalid(&field, e))?)
            }
            SpaceDecl::Union { parts } => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| invalid(&field, "empty union"))?;
                let mut acc = self.finite(&field, first)?.clone();
                for p in it {
                    acc = acc.disjoint_union(self.finite(&field, p)?)?;
                }
                BuiltSpace::Finite(acc)
            }
            SpaceDecl::Boundary => match self.group {
                GroupContext::Free { rank } => BuiltSpace::Boundary(BoundarySpace::free(rank).map_err(|e| invalid(&field, e))?),
                _ => return Err(invalid(&field, "boundary needs a free group")),
            },
            SpaceDecl::SubgroupBoundary { fiber_action } => BuiltSpace::Boundary(self.subgroup_boundary(&field, *fiber_action)?),
            SpaceDecl::InducedBoundary { fiber_action } => {
                let fiber = self.subgroup_boundary(&field, *fiber_action)?;
                BuiltSpace::Induced(InducedSpace::new(self.table(&field)?.clone(), fiber)?)
            }
            SpaceDecl::InducedFinite { fiber } => {
                let z = self.finite(&field, fiber)?.clone();
                let induced = InducedSpace::new(self.table(&field)?.clone(), z)?;
                let (space, projection) = induced.flatten().map_err(|e| invalid(&field, e))?;
                BuiltSpace::InducedFinite { space, projection, base: FiniteSpace::from_coset_table(induced.table()) }
            }
        })
    }

    fn build_extension(&self, name: &str, decl: &ExtensionDecl) -> Result<BuiltExtension> {
        let field = format!("extensions.{name}");
        let lookup = |s: &str| self.spaces.get(s).ok_or_else(|| invalid(&field, format!("unknown space {s:?}")));
        Ok(match decl {
            ExtensionDecl::Projection { space } => match lookup(space)? {
                BuiltSpace::Induced(y) => BuiltExtension::Induced { source: space.clone(), projection: InducedProjection::new(y.clone()) },
                BuiltSpace::InducedFinite { space: y, projection, base } => BuiltExtension::Finite {
                    source: space.clone(),
                    extension: FiniteExtension::new(y.clone(), base.clone(), projection.clone()).map_err(|e| invalid(&field, e))?,
                },
                _ => return Err(invalid(&field, format!("{space:?} is not an induced space"))),
            },
            ExtensionDecl::FiniteMap { source, target, map } => BuiltExtension::Finite {
                source: source.clone(),
                // Not validated here: invalid maps are reported on by the checks.
                extension: FiniteExtension::unchecked(
                    self.finite(&field, source)?.clone(),
                    self.finite(&field, target)?.clone(),
                    map.clone(),
                ),
            },
            ExtensionDecl::Identity { space } => {
                BuiltExtension::Finite { source: space.clone(), extension: FiniteExtension::identity(self.finite(&field, space)?.clone()) }
            }
            ExtensionDecl::TwistedDouble { base, twist } => BuiltExtension::Finite {
                source: base.clone(),
                extension: FiniteExtension::twisted_double(self.finite(&field, base)?, &perms(&field, twist)?)
                    .map_err(|e| invalid(&field, e))?,
            },
        })
    }
}
