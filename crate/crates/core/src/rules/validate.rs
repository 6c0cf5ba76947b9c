use std::collections::HashMap;
use std::fmt;

use crate::rules::RuleSet;
use crate::variable::LinguisticVariable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Info,
    Error,
}

/// One observation about a rule set. Rule-scoped findings carry the rule's
/// position in the set (`index`, 0-based) as well as its id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    EmptyRuleSet,
    UnknownOutputVariable {
        variable: String,
    },
    UnresolvedVariable {
        index: usize,
        rule: String,
        variable: String,
    },
    UnresolvedCategory {
        index: usize,
        rule: String,
        variable: String,
        category: String,
    },
    DuplicateRuleId {
        index: usize,
        rule: String,
    },
    ConsequentNotOutput {
        index: usize,
        rule: String,
        variable: String,
    },
    OutputInAntecedent {
        index: usize,
        rule: String,
    },
    /// An output category no rule can produce.
    UnusedOutputCategory {
        category: String,
    },
    /// Two output categories are both non-zero at some grid node, so their
    /// possibilities are not independent.
    OverlappingOutputCategories {
        first: String,
        second: String,
    },
}

impl Finding {
    pub fn severity(&self) -> Severity {
        match self {
            Finding::UnusedOutputCategory { .. } | Finding::OverlappingOutputCategories { .. } => {
                Severity::Info
            }
            _ => Severity::Error,
        }
    }

    pub fn rule_index(&self) -> Option<usize> {
        match self {
            Finding::UnresolvedVariable { index, .. }
            | Finding::UnresolvedCategory { index, .. }
            | Finding::DuplicateRuleId { index, .. }
            | Finding::ConsequentNotOutput { index, .. }
            | Finding::OutputInAntecedent { index, .. } => Some(*index),
            _ => None,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::EmptyRuleSet => f.write_str("rule set has no rules"),
            Finding::UnknownOutputVariable { variable } => {
                write!(f, "output variable `{variable}` is not declared")
            }
            Finding::UnresolvedVariable { rule, variable, .. } => {
                write!(f, "rule {rule}: unknown variable `{variable}`")
            }
            Finding::UnresolvedCategory {
                rule,
                variable,
                category,
                ..
            } => write!(
                f,
                "rule {rule}: variable `{variable}` has no category `{category}`"
            ),
            Finding::DuplicateRuleId { rule, .. } => write!(f, "duplicate rule id `{rule}`"),
            Finding::ConsequentNotOutput { rule, variable, .. } => write!(
                f,
                "rule {rule}: consequent names `{variable}`, which is not the output variable"
            ),
            Finding::OutputInAntecedent { rule, .. } => {
                write!(f, "rule {rule}: antecedent reads the output variable")
            }
            Finding::UnusedOutputCategory { category } => {
                write!(
                    f,
                    "output category `{category}` is never produced by any rule"
                )
            }
            Finding::OverlappingOutputCategories { first, second } => {
                write!(f, "output categories `{first}` and `{second}` overlap")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity() == Severity::Error)
    }

    pub fn infos(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity() == Severity::Info)
    }
}

pub fn validate_ruleset(rs: &RuleSet, vars: &[LinguisticVariable]) -> ValidationReport {
    let mut findings = Vec::new();
    let by_name: HashMap<&str, &LinguisticVariable> = vars.iter().map(|v| (v.name(), v)).collect();
    if rs.rules.is_empty() {
        findings.push(Finding::EmptyRuleSet);
    }
    let output = by_name.get(rs.output_variable.as_str()).copied();
    if output.is_none() {
        findings.push(Finding::UnknownOutputVariable {
            variable: rs.output_variable.clone(),
        });
    }

    let mut seen_ids: HashMap<&str, usize> = HashMap::new();
    for (index, rule) in rs.rules.iter().enumerate() {
        if seen_ids.insert(rule.id.as_str(), index).is_some() {
            findings.push(Finding::DuplicateRuleId {
                index,
                rule: rule.id.clone(),
            });
        }
        let mut reads_output = false;
        for clause in &rule.antecedent {
            reads_output |= clause.variable == rs.output_variable;
            match by_name.get(clause.variable.as_str()) {
                None => findings.push(Finding::UnresolvedVariable {
                    index,
                    rule: rule.id.clone(),
                    variable: clause.variable.clone(),
                }),
                Some(v) if !v.has_category(&clause.category) => {
                    findings.push(Finding::UnresolvedCategory {
                        index,
                        rule: rule.id.clone(),
                        variable: clause.variable.clone(),
                        category: clause.category.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        if reads_output {
            findings.push(Finding::OutputInAntecedent {
                index,
                rule: rule.id.clone(),
            });
        }
        let consequent = &rule.consequent;
        if consequent.variable != rs.output_variable {
            findings.push(Finding::ConsequentNotOutput {
                index,
                rule: rule.id.clone(),
                variable: consequent.variable.clone(),
            });
        } else if let Some(out) = output {
            if !out.has_category(&consequent.category) {
                findings.push(Finding::UnresolvedCategory {
                    index,
                    rule: rule.id.clone(),
                    variable: consequent.variable.clone(),
                    category: consequent.category.clone(),
                });
            }
        }
    }

    if let Some(out) = output {
        for category in out.category_names() {
            let produced = rs.rules.iter().any(|r| {
                r.consequent.variable == rs.output_variable && r.consequent.category == category
            });
            if !produced {
                findings.push(Finding::UnusedOutputCategory {
                    category: category.to_owned(),
                });
            }
        }
        findings.extend(overlaps(out));
    }

    ValidationReport { findings }
}

fn overlaps(var: &LinguisticVariable) -> Vec<Finding> {
    let sampled: Vec<(&str, Vec<bool>)> = var
        .category_names()
        .map(|c| {
            let mask = var
                .sample_on_grid(c)
                .expect("category listed by the variable")
                .into_iter()
                .map(|d| d.value() > 0.0)
                .collect();
            (c, mask)
        })
        .collect();
    let mut out = Vec::new();
    for (i, (a, ma)) in sampled.iter().enumerate() {
        for (b, mb) in &sampled[i + 1..] {
            if ma.iter().zip(mb).any(|(x, y)| *x && *y) {
                out.push(Finding::OverlappingOutputCategories {
                    first: (*a).to_owned(),
                    second: (*b).to_owned(),
                });
            }
        }
    }
    out
}
