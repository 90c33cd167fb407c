//! The JSON scenario format.
//!
//! Complex numbers are `[re, im]`, matrices are lists of rows, algebra
//! elements are lists of block matrices, and group maps are index arrays.
//! Every declaration lives in a name-keyed table, so output order follows
//! names.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;
/// One matrix per block.
pub type Element = Vec<Matrix>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: String,
    #[serde(default)]
    pub declarations: Declarations,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Declarations {
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub crossed_modules: BTreeMap<String, CrossedModuleSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub two_groups: BTreeMap<String, TwoGroupSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub homs: BTreeMap<String, HomSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub automorphisms: BTreeMap<String, AutomorphismSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub representations: BTreeMap<String, RepresentationSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub covers: BTreeMap<String, CoverSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub bundles: BTreeMap<String, BundleSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub gerbes: BTreeMap<String, GerbeSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub two_vector_bundles: BTreeMap<String, TwoVectorBundleSpec>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub refinements: BTreeMap<String, RefinementSpec>,
}

/// A command run against the document, with its inputs by role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub command: String,
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
}

/// Either the name of a group declaration or an inline group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Inline(GroupSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
    /// `table[a][b] = ab`.
    Table(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CrossedModuleSpec {
    Inner(GroupRef),
    Discrete(GroupRef),
    /// `ℤ/n → ℤ/m`, reduction mod `m`, trivial action.
    CyclicReduction {
        n: usize,
        m: usize,
    },
    /// `alpha[g][h] = α(g, h)`.
    Explicit {
        g: GroupRef,
        h: GroupRef,
        t: Vec<usize>,
        alpha: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TwoGroupSpec {
    /// The 2-group of a declared crossed module.
    FromCrossed(String),
    Explicit {
        g0: GroupRef,
        g1: GroupRef,
        s: Vec<usize>,
        t: Vec<usize>,
        i: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HomSpec {
    Tables {
        source: String,
        target: String,
        f0: Vec<usize>,
        f1: Vec<usize>,
    },
    /// From group maps `G → G'` and `H → H'` (crossed-module indices).
    Crossed {
        source: String,
        target: String,
        f_g: Vec<usize>,
        f_h: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// Either the name of an automorphism declaration or an inline one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutomorphismRef {
    Name(String),
    Inline(AutomorphismSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AutomorphismSpec {
    Identity {
        algebra: String,
    },
    Inner {
        algebra: String,
        unitary: Element,
    },
    BlockPermutation {
        algebra: String,
        perm: Vec<usize>,
    },
    /// Matrix on flat coordinates of `A` (block-major, row-major inside blocks).
    Matrix {
        algebra: String,
        matrix: Matrix,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleSpec {
    Standard {
        algebra: String,
    },
    Twisted {
        algebra: String,
        twist: AutomorphismRef,
    },
    Explicit(BimoduleData),
}

/// A bimodule in orthonormal coordinates: the action of each matrix unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleData {
    pub left_algebra: String,
    pub right_algebra: String,
    pub left_ops: Vec<Matrix>,
    pub right_ops: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RepresentationSpec {
    Trivial {
        two_group: String,
        algebra: String,
    },
    /// `R0` and the unitaries `u_h` with `R1(h) = L_{u_h}`, `h ∈ ker(s)`.
    CrossedData {
        two_group: String,
        algebra: String,
        r0: Vec<AutomorphismRef>,
        u: Vec<Element>,
    },
    /// `R0` and every `R1(X)` as a unitary on `L²(A)`.
    Unitaries {
        two_group: String,
        algebra: String,
        r0: Vec<AutomorphismRef>,
        r1: Vec<Matrix>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub base: usize,
    pub proj: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BundleSpec {
    /// Points `x·|H| + h` over `x`, anchor `t(h)⁻¹ anchor[x]`.
    Trivial {
        two_group: String,
        base: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchor: Option<Vec<usize>>,
    },
    /// `action[p][h] = p·h` with `h` a crossed-module index of `H`.
    Explicit {
        two_group: String,
        base: usize,
        proj: Vec<usize>,
        action: Vec<Vec<usize>>,
        anchor: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GerbeSpec {
    Trivial {
        cover: String,
        two_group: String,
    },
    /// `g` on `Y^[2]`, `c` on `Y^[3]` (lexicographic order of tuples).
    Cocycle {
        cover: String,
        two_group: String,
        g: Vec<usize>,
        c: Vec<usize>,
    },
    /// `mu[z]` is the image of `b₀ ⊗ c₀`, the lowest-index points of `P`
    /// over `pr₂₃(z)` and `pr₁₂(z)`.
    Explicit {
        cover: String,
        bundle: String,
        mu: Vec<usize>,
    },
    Extension {
        gerbe: String,
        hom: String,
    },
    Pullback {
        gerbe: String,
        cover: String,
        rho: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TwoVectorBundleSpec {
    Trivial {
        cover: String,
        algebra: String,
    },
    Associate {
        gerbe: String,
        representation: String,
    },
    /// `mu[z]` acts on `M₂₃ ⊗ M₁₂`, index `i · dim M₁₂ + j`.
    Explicit {
        cover: String,
        algebras: Vec<String>,
        bimodules: Vec<BimoduleData>,
        mu: Vec<Matrix>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RefinementSpec {
    Identity {
        bundle: String,
    },
    /// From `associate(ρ*𝒬, R)` to `associate(𝒬, R)`; `gerbe` must be a
    /// pullback declaration.
    Pullback {
        gerbe: String,
        representation: String,
    },
    Explicit {
        source: String,
        target: String,
        rho: Vec<usize>,
        phi: Vec<Matrix>,
        u: Vec<Matrix>,
    },
}
