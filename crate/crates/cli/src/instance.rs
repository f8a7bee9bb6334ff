//! The TOML instance format: parsing with source locations, validation into a
//! [`ProblemState`], and writing back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use fptprop::{
    Constraint, Domain, Permutation, ProblemState, SetVarId, TuplePredicate, Value, VarId,
    VALUE_MAX, VALUE_MIN,
};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use toml::Spanned;

use crate::error::CliError;

/// One instance file, as written on disk.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, rename = "var", skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<Spanned<VarDecl>>,
    #[serde(default, rename = "setvar", skip_serializing_if = "Vec::is_empty")]
    pub set_vars: Vec<Spanned<SetVarDecl>>,
    #[serde(default, rename = "constraint", skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<Spanned<ConstraintDecl>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarDecl {
    pub name: String,
    pub domain: Vec<Value>,
}

/// A set variable over `universe`; `lb` elements are in, elements outside
/// `ub` are out, the rest are undecided. `ub` defaults to the universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetVarDecl {
    pub name: String,
    pub universe: Vec<Value>,
    #[serde(default)]
    pub lb: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ub: Option<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintDecl {
    /// Label used in reports; defaults to `c<index>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub body: ConstraintBody,
}

impl<'de> Deserialize<'de> for ConstraintDecl {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut table = toml::Table::deserialize(d)?;
        let name = match table.remove("name") {
            None => None,
            Some(toml::Value::String(s)) => Some(s),
            Some(other) => {
                return Err(D::Error::custom(format!(
                    "field `name` must be a string, found {}",
                    other.type_str()
                )))
            }
        };
        let body = ConstraintBody::deserialize(toml::Value::Table(table))
            .map_err(|e| D::Error::custom(e.message().trim()))?;
        Ok(ConstraintDecl { name, body })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintBody {
    Nvalue {
        x: Vec<String>,
        n: String,
    },
    Uses {
        x: Vec<String>,
        y: Vec<String>,
    },
    Cardpath {
        x: Vec<String>,
        n: String,
        p: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        builtin: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tuples: Option<Vec<Vec<Value>>>,
    },
    Valsymbreak {
        x: Vec<String>,
        symmetries: Vec<Vec<[Value; 2]>>,
    },
    Disjoint {
        x: Vec<String>,
        y: Vec<String>,
    },
    AmongSet {
        x: Vec<String>,
        set: String,
        n: String,
    },
    Roots {
        x: Vec<String>,
        s: String,
        t: String,
    },
    SumEq {
        x: Vec<String>,
        target: String,
    },
    Extensional {
        scope: Vec<String>,
        tuples: Vec<Vec<Value>>,
    },
}

/// A validated instance: the problem state plus the label of each constraint.
#[derive(Debug, Clone)]
pub struct Model {
    pub state: ProblemState,
    pub labels: Vec<String>,
}

/// Line and column (both 1-based) of a byte offset.
pub fn location(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Located<'a> {
    source: &'a str,
    span: Range<usize>,
    what: String,
}

impl Located<'_> {
    fn err(&self, field: &str, message: impl fmt::Display) -> CliError {
        let (line, column) = location(self.source, self.span.start);
        CliError::Invalid {
            line,
            column,
            message: format!("{}, field `{field}`: {message}", self.what),
        }
    }
}

impl InstanceFile {
    pub fn parse(source: &str) -> Result<Self, CliError> {
        toml::from_str(source).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| location(source, s.start));
            CliError::Parse {
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })
    }

    /// Serializes back to the format [`InstanceFile::parse`] reads.
    pub fn write(&self) -> String {
        toml::to_string(self).expect("instance files always serialize")
    }

    /// Checks names and parameters and builds the problem. `source` is the
    /// text this file was parsed from, used to locate errors.
    pub fn build(&self, source: &str) -> Result<Model, CliError> {
        let mut state = ProblemState::new();
        let mut vars: BTreeMap<&str, VarId> = BTreeMap::new();
        let mut sets: BTreeMap<&str, SetVarId> = BTreeMap::new();
        let valid_name = |name: &str, at: &Located| -> Result<(), CliError> {
            if name.is_empty() || name.contains('[') || name.contains(']') {
                return Err(at.err("name", format!("`{name}` is not a valid name")));
            }
            Ok(())
        };

        for decl in &self.vars {
            let at = Located {
                source,
                span: decl.span(),
                what: format!("variable `{}`", decl.get_ref().name),
            };
            let d = decl.get_ref();
            valid_name(&d.name, &at)?;
            if vars.contains_key(d.name.as_str()) || sets.contains_key(d.name.as_str()) {
                return Err(at.err("name", "declared twice"));
            }
            check_values(&d.domain, &at, "domain")?;
            if d.domain.is_empty() {
                return Err(at.err("domain", "must not be empty"));
            }
            let id = state
                .add_var(d.name.clone(), Domain::new(d.domain.iter().copied()))
                .map_err(|e| at.err("domain", e))?;
            vars.insert(&d.name, id);
        }

        for decl in &self.set_vars {
            let d = decl.get_ref();
            let at = Located {
                source,
                span: decl.span(),
                what: format!("set variable `{}`", d.name),
            };
            valid_name(&d.name, &at)?;
            if vars.contains_key(d.name.as_str()) || sets.contains_key(d.name.as_str()) {
                return Err(at.err("name", "declared twice"));
            }
            check_values(&d.universe, &at, "universe")?;
            check_values(&d.lb, &at, "lb")?;
            let ub = d.ub.clone().unwrap_or_else(|| d.universe.clone());
            check_values(&ub, &at, "ub")?;
            if let Some(v) = ub.iter().find(|v| !d.universe.contains(v)) {
                return Err(at.err("ub", format!("{v} is not in the universe")));
            }
            if let Some(v) = d.lb.iter().find(|v| !ub.contains(v)) {
                return Err(at.err("lb", format!("{v} is not in ub")));
            }
            let id = state
                .add_set_var(d.name.clone(), &d.universe, &d.lb, &ub)
                .map_err(|e| at.err("universe", e))?;
            sets.insert(&d.name, id);
        }

        let mut labels = Vec::with_capacity(self.constraints.len());
        for (i, decl) in self.constraints.iter().enumerate() {
            let d = decl.get_ref();
            let label = d.name.clone().unwrap_or_else(|| format!("c{i}"));
            let at = Located {
                source,
                span: decl.span(),
                what: format!("constraint `{label}`"),
            };
            if labels.contains(&label) {
                return Err(at.err("name", "declared twice"));
            }
            let var = |field: &str, name: &str| -> Result<VarId, CliError> {
                vars.get(name)
                    .copied()
                    .ok_or_else(|| at.err(field, format!("undeclared variable `{name}`")))
            };
            let var_list = |field: &str, names: &[String]| -> Result<Vec<VarId>, CliError> {
                names.iter().map(|n| var(field, n)).collect()
            };
            let set = |field: &str, name: &str| -> Result<SetVarId, CliError> {
                sets.get(name)
                    .copied()
                    .ok_or_else(|| at.err(field, format!("undeclared set variable `{name}`")))
            };

            let (constraint, field) = match &d.body {
                ConstraintBody::Nvalue { x, n } => (
                    Constraint::NValue {
                        xs: var_list("x", x)?,
                        n: var("n", n)?,
                    },
                    "x",
                ),
                ConstraintBody::Uses { x, y } => (
                    Constraint::Uses {
                        xs: var_list("x", x)?,
                        ys: var_list("y", y)?,
                    },
                    "x",
                ),
                ConstraintBody::Cardpath {
                    x,
                    n,
                    p,
                    builtin,
                    tuples,
                } => {
                    let predicate = match (builtin, tuples) {
                        (Some(b), None) => TuplePredicate::builtin(b).ok_or_else(|| {
                            at.err(
                                "builtin",
                                format!(
                                    "unknown builtin `{b}`, expected equal, not_equal or less_than"
                                ),
                            )
                        })?,
                        (None, Some(t)) => {
                            for tuple in t {
                                check_values(tuple, &at, "tuples")?;
                            }
                            TuplePredicate::table(t.iter().cloned())
                        }
                        _ => {
                            return Err(
                                at.err("builtin", "give exactly one of `builtin` or `tuples`")
                            )
                        }
                    };
                    (
                        Constraint::CardPath {
                            xs: var_list("x", x)?,
                            n: var("n", n)?,
                            p: *p,
                            predicate,
                        },
                        "p",
                    )
                }
                ConstraintBody::Valsymbreak { x, symmetries } => {
                    let symmetries = symmetries
                        .iter()
                        .map(|pairs| {
                            check_values(&pairs.concat(), &at, "symmetries")?;
                            Permutation::new(pairs.iter().map(|&[a, b]| (a, b)))
                                .map_err(|e| at.err("symmetries", e))
                        })
                        .collect::<Result<_, _>>()?;
                    (
                        Constraint::ValSymBreak {
                            xs: var_list("x", x)?,
                            symmetries,
                        },
                        "symmetries",
                    )
                }
                ConstraintBody::Disjoint { x, y } => (
                    Constraint::Disjoint {
                        xs: var_list("x", x)?,
                        ys: var_list("y", y)?,
                    },
                    "x",
                ),
                ConstraintBody::AmongSet { x, set: s, n } => (
                    Constraint::AmongSet {
                        xs: var_list("x", x)?,
                        set: set("set", s)?,
                        n: var("n", n)?,
                    },
                    "set",
                ),
                ConstraintBody::Roots { x, s, t } => (
                    Constraint::Roots {
                        xs: var_list("x", x)?,
                        s: set("s", s)?,
                        t: set("t", t)?,
                    },
                    "s",
                ),
                ConstraintBody::SumEq { x, target } => (
                    Constraint::SumEq {
                        xs: var_list("x", x)?,
                        target: var("target", target)?,
                    },
                    "x",
                ),
                ConstraintBody::Extensional { scope, tuples } => {
                    for tuple in tuples {
                        check_values(tuple, &at, "tuples")?;
                    }
                    (
                        Constraint::Extensional {
                            scope: var_list("scope", scope)?,
                            tuples: tuples.clone(),
                        },
                        "tuples",
                    )
                }
            };
            state
                .add_constraint(constraint)
                .map_err(|e| at.err(field, e))?;
            labels.push(label);
        }

        Ok(Model { state, labels })
    }
}

fn check_values(values: &[Value], at: &Located, field: &str) -> Result<(), CliError> {
    match values
        .iter()
        .find(|v| !(VALUE_MIN..=VALUE_MAX).contains(*v))
    {
        Some(v) => Err(at.err(field, format!("value {v} is outside the 32-bit range"))),
        None => Ok(()),
    }
}

/// Describes an existing problem state as an instance file, so generated
/// instances can be written out.
pub fn from_state(state: &ProblemState, labels: &[String]) -> InstanceFile {
    let bits: BTreeSet<VarId> = state
        .set_vars()
        .iter()
        .flat_map(|s| s.bits.iter().copied())
        .collect();
    let vars = state
        .vars()
        .iter()
        .filter(|v| !bits.contains(&v.id))
        .map(|v| {
            Spanned::new(
                0..0,
                VarDecl {
                    name: v.name.clone(),
                    domain: v.domain.values().to_vec(),
                },
            )
        })
        .collect();
    let set_vars = state
        .set_vars()
        .iter()
        .map(|s| {
            Spanned::new(
                0..0,
                SetVarDecl {
                    name: s.name.clone(),
                    universe: s.universe.clone(),
                    lb: state.lb(s.id).expect("declared set"),
                    ub: Some(state.ub(s.id).expect("declared set")),
                },
            )
        })
        .collect();
    let names = |xs: &[VarId]| xs.iter().map(|&x| state.name(x).to_string()).collect();
    let set_name = |s: SetVarId| state.set_vars()[s.0].name.clone();
    let constraints = state
        .constraints()
        .iter()
        .zip(labels)
        .map(|(c, label)| {
            let body = match c {
                Constraint::NValue { xs, n } => ConstraintBody::Nvalue {
                    x: names(xs),
                    n: state.name(*n).to_string(),
                },
                Constraint::Uses { xs, ys } => ConstraintBody::Uses {
                    x: names(xs),
                    y: names(ys),
                },
                Constraint::CardPath {
                    xs,
                    n,
                    p,
                    predicate,
                } => {
                    let (builtin, tuples) = match predicate {
                        TuplePredicate::Table(t) => (None, Some(t.iter().cloned().collect())),
                        other => (Some(other.name().to_string()), None),
                    };
                    ConstraintBody::Cardpath {
                        x: names(xs),
                        n: state.name(*n).to_string(),
                        p: *p,
                        builtin,
                        tuples,
                    }
                }
                Constraint::ValSymBreak { xs, symmetries } => ConstraintBody::Valsymbreak {
                    x: names(xs),
                    symmetries: symmetries
                        .iter()
                        .map(|s| s.pairs().map(|(a, b)| [a, b]).collect())
                        .collect(),
                },
                Constraint::Disjoint { xs, ys } => ConstraintBody::Disjoint {
                    x: names(xs),
                    y: names(ys),
                },
                Constraint::AmongSet { xs, set, n } => ConstraintBody::AmongSet {
                    x: names(xs),
                    set: set_name(*set),
                    n: state.name(*n).to_string(),
                },
                Constraint::Roots { xs, s, t } => ConstraintBody::Roots {
                    x: names(xs),
                    s: set_name(*s),
                    t: set_name(*t),
                },
                Constraint::SumEq { xs, target } => ConstraintBody::SumEq {
                    x: names(xs),
                    target: state.name(*target).to_string(),
                },
                Constraint::Extensional { scope, tuples } => ConstraintBody::Extensional {
                    scope: names(scope),
                    tuples: tuples.clone(),
                },
            };
            Spanned::new(
                0..0,
                ConstraintDecl {
                    name: Some(label.clone()),
                    body,
                },
            )
        })
        .collect();
    InstanceFile {
        vars,
        set_vars,
        constraints,
    }
}
