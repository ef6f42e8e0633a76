//! The JSON document describing a constructed function:
//! `{family, n, k, support, values, group: {type, generators}}`.

use serde::{Deserialize, Serialize};

use crate::assignment::PartialAssignment;
use crate::constructions::{
    auxiliary_g, minterm_closure, new_function, rubinstein_cyclic, AuxiliaryG, OrbitPattern, Rubinstein, Symmetry,
};
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use crate::perm::{GeneratedGroup, Permutation};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// The n-cycle; `generators` is left empty.
    Cyclic,
    Generated,
    /// No symmetry (the block pattern `g` on its own).
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(rename = "type")]
    pub kind: GroupKind,
    /// One-line images, 1-based.
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub n: usize,
    /// Block size for the block-pattern families, support size otherwise.
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
}

/// Families whose `k` is the block size of the cyclic block pattern.
pub const BLOCK_PATTERN_FAMILIES: [&str; 3] = ["theorem31", "theorem32", "new-function"];

fn parts(p: &PartialAssignment) -> (Option<Vec<usize>>, Option<Vec<u8>>) {
    (Some(p.support()), Some(p.values().into_iter().map(u8::from).collect()))
}

impl FunctionDoc {
    pub fn from_pattern(family: &str, f: &OrbitPattern) -> FunctionDoc {
        let (support, values) = parts(f.minterm());
        let group = match f.symmetry() {
            Symmetry::Cyclic => GroupDoc { kind: GroupKind::Cyclic, generators: vec![] },
            Symmetry::Generated(g) => {
                GroupDoc { kind: GroupKind::Generated, generators: g.generators().iter().map(|p| p.image()).collect() }
            }
        };
        FunctionDoc {
            family: Some(family.to_string()),
            n: f.arity(),
            k: f.block_size().unwrap_or(f.k()),
            support,
            values,
            group: Some(group),
        }
    }

    pub fn from_rubinstein(f: &Rubinstein) -> FunctionDoc {
        FunctionDoc {
            family: Some("rubinstein".into()),
            n: f.arity(),
            k: f.k(),
            support: None,
            values: None,
            group: None,
        }
    }

    pub fn from_auxiliary_g(g: &AuxiliaryG) -> FunctionDoc {
        let spec = g.spec();
        FunctionDoc {
            family: Some("auxiliary-g".into()),
            n: g.arity(),
            k: spec.k(),
            support: Some(spec.fixed_positions().iter().map(|&(p, _)| p).collect()),
            values: Some(spec.fixed_positions().iter().map(|&(_, v)| v as u8).collect()),
            group: Some(GroupDoc { kind: GroupKind::Trivial, generators: vec![] }),
        }
    }

    fn minterm(&self) -> Result<PartialAssignment> {
        let support = self.support.as_deref().ok_or_else(|| Error::Parse("missing support".into()))?;
        let values = self.values.as_deref().ok_or_else(|| Error::Parse("missing values".into()))?;
        if let Some(bad) = values.iter().find(|&&v| v > 1) {
            return Err(Error::Parse(format!("value {bad} is not a bit")));
        }
        let bits: Vec<bool> = values.iter().map(|&v| v == 1).collect();
        PartialAssignment::from_parts(self.n, support, &bits)
    }

    fn check_same(&self, expected: &PartialAssignment) -> Result<()> {
        if &self.minterm()? != expected {
            return Err(Error::Parse(format!(
                "support/values do not match family {:?} at n={}, k={}",
                self.family.as_deref().unwrap_or(""),
                self.n,
                self.k
            )));
        }
        Ok(())
    }

    /// Rebuilds the function, validating the document against its family.
    pub fn load(&self) -> Result<Construction> {
        let family = self.family.as_deref();
        if family == Some("rubinstein") {
            let f = rubinstein_cyclic(self.k)?;
            if f.arity() != self.n {
                return Err(Error::Parse(format!("rubinstein with k={} has n={}", self.k, f.arity())));
            }
            return Ok(Construction::Rubinstein(f));
        }
        if family.is_some_and(|f| BLOCK_PATTERN_FAMILIES.contains(&f)) {
            let f = new_function(self.n, self.k)?;
            self.check_same(f.minterm())?;
            return Ok(Construction::Pattern(f));
        }
        let group = self.group.as_ref().ok_or_else(|| Error::Parse("missing group".into()))?;
        match group.kind {
            GroupKind::Trivial => {
                let (g, spec) = auxiliary_g(self.k)?;
                self.check_same(&spec.embed(self.n)?)?;
                Ok(Construction::AuxiliaryG(g))
            }
            GroupKind::Cyclic => Ok(Construction::Pattern(OrbitPattern::cyclic(self.minterm()?)?)),
            GroupKind::Generated => {
                let gens =
                    group.generators.iter().map(|img| Permutation::new(img.clone())).collect::<Result<Vec<_>>>()?;
                let g = GeneratedGroup::new(gens)?;
                Ok(Construction::Pattern(minterm_closure(&self.minterm()?, &g)?))
            }
        }
    }
}

/// Any function the document format can describe.
#[derive(Clone, Debug)]
pub enum Construction {
    Pattern(OrbitPattern),
    Rubinstein(Rubinstein),
    AuxiliaryG(AuxiliaryG),
}

impl Construction {
    pub fn as_pattern(&self) -> Option<&OrbitPattern> {
        match self {
            Construction::Pattern(p) => Some(p),
            _ => None,
        }
    }
}

impl BooleanFunction for Construction {
    fn arity(&self) -> usize {
        match self {
            Construction::Pattern(f) => f.arity(),
            Construction::Rubinstein(f) => f.arity(),
            Construction::AuxiliaryG(f) => f.arity(),
        }
    }

    fn eval(&self, x: &Word) -> bool {
        match self {
            Construction::Pattern(f) => f.eval(x),
            Construction::Rubinstein(f) => f.eval(x),
            Construction::AuxiliaryG(f) => f.eval(x),
        }
    }

    fn eval_index(&self, index: u64) -> bool {
        match self {
            Construction::Pattern(f) => f.eval_index(index),
            Construction::Rubinstein(f) => f.eval_index(index),
            Construction::AuxiliaryG(f) => f.eval_index(index),
        }
    }
}
