//! JSON configuration (`"schema": 1`).
//!
//! Loading never stops at the first problem: every violation is collected
//! with the JSON pointer of the offending value.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde_json::{Map, Value};

use posfis_core::rules::{parse_rule_at, strip_comment, validate_ruleset, Finding};
use posfis_core::{
    Direction, FuzzyDegree, InferenceSystem, LinguisticVariable, MembershipFunction, RuleSet,
    Settings, DEFAULT_GRID_POINTS, DEFAULT_PERCENTILES,
};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

/// A problem found while loading, located by JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "{at}: {}", self.message)
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub grid_points: Option<usize>,
    pub percentiles: Option<Vec<f64>>,
    pub unsure_in_necessity: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvaluationConfig {
    /// CSV column holding the verifying output category.
    pub verify_column: Option<String>,
    /// Reference support per category for the experimental gain.
    pub baseline: IndexMap<String, FuzzyDegree>,
}

#[derive(Debug, Clone)]
pub struct SystemConfig {
    pub name: Option<String>,
    pub output_variable: String,
    pub grid_points: usize,
    pub percentiles: Vec<f64>,
    pub unsure_in_necessity: bool,
    pub evaluation: EvaluationConfig,
    /// Informational findings (unused output categories, overlaps).
    pub notes: Vec<String>,
    system: InferenceSystem,
}

impl SystemConfig {
    pub fn system(&self) -> &InferenceSystem {
        &self.system
    }

    pub fn variables(&self) -> &[LinguisticVariable] {
        self.system.variables()
    }

    pub fn rules(&self) -> &RuleSet {
        self.system.rules()
    }
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<SystemConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text, overrides)
}

pub fn parse_config(text: &str, overrides: &Overrides) -> Result<SystemConfig, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        CliError::Config(vec![Violation {
            pointer: String::new(),
            message: format!(
                "invalid JSON at line {} column {}: {e}",
                e.line(),
                e.column()
            ),
        }])
    })?;
    let mut checker = Checker::default();
    let built = checker.config(&value, overrides);
    match built {
        Some(cfg) if checker.violations.is_empty() => Ok(cfg),
        _ => Err(CliError::Config(checker.violations)),
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

#[derive(Default)]
struct Checker {
    violations: Vec<Violation>,
}

struct VariableSpec {
    name: String,
    pointer: String,
    universe: (f64, f64),
    grid_points: Option<usize>,
    categories: Vec<(String, String, MembershipFunction)>,
}

impl Checker {
    fn push(&mut self, pointer: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            pointer: pointer.into(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, ptr: &str) -> Option<&'a Map<String, Value>> {
        let obj = v.as_object();
        if obj.is_none() {
            self.push(ptr, "expected an object");
        }
        obj
    }

    fn known_keys(&mut self, obj: &Map<String, Value>, ptr: &str, allowed: &[&str]) {
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                self.push(
                    format!("{ptr}/{}", escape(key)),
                    format!("unknown field; expected one of: {}", allowed.join(", ")),
                );
            }
        }
    }

    fn required<'a>(
        &mut self,
        obj: &'a Map<String, Value>,
        ptr: &str,
        key: &str,
    ) -> Option<&'a Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.push(ptr, format!("missing required field `{key}`"));
        }
        v
    }

    fn string(&mut self, v: &Value, ptr: &str) -> Option<String> {
        match v.as_str() {
            Some(s) => Some(s.to_owned()),
            None => {
                self.push(ptr, "expected a string");
                None
            }
        }
    }

    fn identifier(&mut self, v: &Value, ptr: &str) -> Option<String> {
        let s = self.string(v, ptr)?;
        let mut chars = s.chars();
        let ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        let keyword = ["if", "is", "not", "and", "or", "then"]
            .iter()
            .any(|k| k.eq_ignore_ascii_case(&s));
        if !ok || keyword {
            self.push(
                ptr,
                format!("`{s}` is not a valid identifier ([A-Za-z_][A-Za-z0-9_]*, not a keyword)"),
            );
            return None;
        }
        Some(s)
    }

    fn number(&mut self, v: &Value, ptr: &str) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.push(ptr, "expected a finite number");
                None
            }
        }
    }

    fn grid_points(&mut self, v: &Value, ptr: &str) -> Option<usize> {
        match v.as_u64() {
            Some(n) if n >= 2 => Some(n as usize),
            Some(n) => {
                self.push(ptr, format!("grid_points must be at least 2, got {n}"));
                None
            }
            None => {
                self.push(ptr, "grid_points must be an integer ≥ 2");
                None
            }
        }
    }

    fn percentiles_ok(&mut self, ps: &[f64], ptr: &str) -> bool {
        let mut ok = true;
        if ps.is_empty() {
            self.push(ptr, "need at least one percentile");
            ok = false;
        }
        for (i, p) in ps.iter().enumerate() {
            if !(*p > 0.0 && *p < 1.0) {
                self.push(
                    format!("{ptr}/{i}"),
                    format!("percentile {p} is outside (0, 1)"),
                );
                ok = false;
            }
        }
        if ps.windows(2).any(|w| w[0] >= w[1]) {
            self.push(ptr, "percentiles must be strictly increasing");
            ok = false;
        }
        ok
    }

    fn config(&mut self, root: &Value, overrides: &Overrides) -> Option<SystemConfig> {
        let obj = self.object(root, "")?;
        self.known_keys(
            obj,
            "",
            &[
                "schema",
                "name",
                "description",
                "output_variable",
                "grid_points",
                "percentiles",
                "unsure_in_necessity",
                "variables",
                "rules",
                "evaluation",
            ],
        );

        match self.required(obj, "", "schema").map(Value::as_u64) {
            Some(Some(SCHEMA_VERSION)) | None => {}
            Some(_) => self.push(
                "/schema",
                format!("unsupported schema; expected {SCHEMA_VERSION}"),
            ),
        }
        let name = obj.get("name").and_then(|v| self.string(v, "/name"));
        if let Some(v) = obj.get("description") {
            self.string(v, "/description");
        }

        let output_variable = self
            .required(obj, "", "output_variable")
            .and_then(|v| self.identifier(v, "/output_variable"));

        let mut grid_points = match obj.get("grid_points") {
            Some(v) => self.grid_points(v, "/grid_points"),
            None => Some(DEFAULT_GRID_POINTS),
        };
        if let Some(n) = overrides.grid_points {
            if n < 2 {
                self.push(
                    "/grid_points",
                    format!("override grid_points must be at least 2, got {n}"),
                );
            }
            grid_points = Some(n);
        }

        let mut percentiles = match obj.get("percentiles") {
            Some(Value::Array(items)) => {
                let ps: Vec<Option<f64>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| self.number(v, &format!("/percentiles/{i}")))
                    .collect();
                ps.into_iter().collect::<Option<Vec<f64>>>()
            }
            Some(_) => {
                self.push("/percentiles", "expected an array of numbers");
                None
            }
            None => Some(DEFAULT_PERCENTILES.to_vec()),
        };
        if let Some(ps) = &overrides.percentiles {
            percentiles = Some(ps.clone());
        }
        if let Some(ps) = &percentiles {
            if !self.percentiles_ok(ps, "/percentiles") {
                percentiles = None;
            }
        }

        let mut unsure_in_necessity = match obj.get("unsure_in_necessity") {
            Some(Value::Bool(b)) => Some(*b),
            Some(_) => {
                self.push("/unsure_in_necessity", "expected a boolean");
                None
            }
            None => Some(true),
        };
        if let Some(b) = overrides.unsure_in_necessity {
            unsure_in_necessity = Some(b);
        }

        let specs = match self.required(obj, "", "variables") {
            Some(Value::Array(items)) => {
                if items.is_empty() {
                    self.push("/variables", "need at least one variable");
                }
                items
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| self.variable(v, &format!("/variables/{i}")))
                    .collect::<Vec<_>>()
            }
            Some(_) => {
                self.push("/variables", "expected an array");
                Vec::new()
            }
            None => Vec::new(),
        };

        let mut seen = HashSet::new();
        let mut variables = Vec::new();
        for spec in &specs {
            if !seen.insert(spec.name.clone()) {
                self.push(
                    format!("{}/name", spec.pointer),
                    format!("duplicate variable `{}`", spec.name),
                );
                continue;
            }
            let points = overrides
                .grid_points
                .or(spec.grid_points)
                .or(grid_points)
                .unwrap_or(DEFAULT_GRID_POINTS)
                .max(2);
            let mut names = HashSet::new();
            let mut cats = Vec::new();
            for (cat_ptr, cat, mf) in &spec.categories {
                if !names.insert(cat.clone()) {
                    self.push(
                        format!("{cat_ptr}/name"),
                        format!("duplicate category `{cat}`"),
                    );
                } else if !mf.touches(spec.universe.0, spec.universe.1) {
                    self.push(
                        cat_ptr.clone(),
                        format!("category `{cat}` has no support inside the universe"),
                    );
                } else {
                    cats.push((cat.clone(), *mf));
                }
            }
            if cats.len() != spec.categories.len() {
                continue;
            }
            match LinguisticVariable::new(
                &spec.name,
                spec.universe.0,
                spec.universe.1,
                points,
                cats,
            ) {
                Ok(v) => variables.push(v),
                Err(e) => self.push(spec.pointer.clone(), e.to_string()),
            }
        }

        let rules = self.rules(obj);

        let evaluation = match obj.get("evaluation") {
            Some(v) => self.evaluation(v),
            None => Some(EvaluationConfig::default()),
        };

        let output_variable = output_variable?;
        let rules = rules?;
        let rule_pointers: Vec<String> = rules.iter().map(|(p, _)| p.clone()).collect();
        let ruleset = RuleSet::new(
            rules.into_iter().map(|(_, r)| r).collect(),
            &output_variable,
        );
        if specs.len() != variables.len() {
            // variable errors already reported; reference checks would only echo them
            return None;
        }

        let report = validate_ruleset(&ruleset, &variables);
        let mut notes = Vec::new();
        for finding in &report.findings {
            let pointer = match finding {
                Finding::EmptyRuleSet => "/rules".to_owned(),
                Finding::UnknownOutputVariable { .. } => "/output_variable".to_owned(),
                f => match f.rule_index() {
                    Some(i) => rule_pointers[i].clone(),
                    None => {
                        notes.push(f.to_string());
                        continue;
                    }
                },
            };
            self.push(pointer, finding.to_string());
        }
        let evaluation = evaluation?;
        if let Some(out) = variables.iter().find(|v| v.name() == output_variable) {
            for cat in evaluation.baseline.keys() {
                if !out.has_category(cat) {
                    self.push(
                        format!("/evaluation/baseline/{}", escape(cat)),
                        format!("`{cat}` is not a category of `{output_variable}`"),
                    );
                }
            }
        }
        if !self.violations.is_empty() {
            return None;
        }

        let settings = Settings {
            percentiles: percentiles?,
            unsure_in_necessity: unsure_in_necessity?,
        };
        match InferenceSystem::new(variables, ruleset, settings.clone()) {
            Ok(system) => Some(SystemConfig {
                name,
                output_variable,
                grid_points: grid_points?,
                percentiles: settings.percentiles,
                unsure_in_necessity: settings.unsure_in_necessity,
                evaluation,
                notes,
                system,
            }),
            Err(e) => {
                self.push("", e.to_string());
                None
            }
        }
    }

    fn variable(&mut self, v: &Value, ptr: &str) -> Option<VariableSpec> {
        let obj = self.object(v, ptr)?;
        self.known_keys(
            obj,
            ptr,
            &[
                "name",
                "units",
                "description",
                "universe",
                "grid_points",
                "categories",
            ],
        );
        let name = self
            .required(obj, ptr, "name")
            .and_then(|v| self.identifier(v, &format!("{ptr}/name")));
        for key in ["units", "description"] {
            if let Some(v) = obj.get(key) {
                self.string(v, &format!("{ptr}/{key}"));
            }
        }
        let universe = match self.required(obj, ptr, "universe") {
            Some(Value::Array(bounds)) if bounds.len() == 2 => {
                let lo = self.number(&bounds[0], &format!("{ptr}/universe/0"));
                let hi = self.number(&bounds[1], &format!("{ptr}/universe/1"));
                match (lo, hi) {
                    (Some(lo), Some(hi)) if lo < hi => Some((lo, hi)),
                    (Some(lo), Some(hi)) => {
                        self.push(
                            format!("{ptr}/universe"),
                            format!("universe [{lo}, {hi}] must have min < max"),
                        );
                        None
                    }
                    _ => None,
                }
            }
            Some(_) => {
                self.push(format!("{ptr}/universe"), "expected [min, max]");
                None
            }
            None => None,
        };
        let grid_points = match obj.get("grid_points") {
            Some(v) => Some(self.grid_points(v, &format!("{ptr}/grid_points"))?),
            None => None,
        };
        let categories = match self.required(obj, ptr, "categories") {
            Some(Value::Array(items)) => {
                if items.is_empty() {
                    self.push(format!("{ptr}/categories"), "need at least one category");
                }
                let parsed: Vec<_> = items
                    .iter()
                    .enumerate()
                    .map(|(i, c)| self.category(c, &format!("{ptr}/categories/{i}")))
                    .collect();
                parsed.into_iter().collect::<Option<Vec<_>>>()
            }
            Some(_) => {
                self.push(format!("{ptr}/categories"), "expected an array");
                None
            }
            None => None,
        };
        Some(VariableSpec {
            name: name?,
            pointer: ptr.to_owned(),
            universe: universe?,
            grid_points,
            categories: categories?,
        })
    }

    fn category(&mut self, v: &Value, ptr: &str) -> Option<(String, String, MembershipFunction)> {
        let obj = self.object(v, ptr)?;
        let name = self
            .required(obj, ptr, "name")
            .and_then(|v| self.identifier(v, &format!("{ptr}/name")));
        let shape = self
            .required(obj, ptr, "shape")
            .and_then(|v| self.string(v, &format!("{ptr}/shape")));
        if let Some(v) = obj.get("description") {
            self.string(v, &format!("{ptr}/description"));
        }
        let height = match obj.get("height") {
            Some(v) => self.number(v, &format!("{ptr}/height")),
            None => Some(1.0),
        };
        let num = |c: &mut Checker, key: &str| -> Option<f64> {
            c.required(obj, ptr, key)
                .and_then(|v| c.number(v, &format!("{ptr}/{key}")))
        };
        let mf = match shape.as_deref() {
            Some("trapezoid") => {
                self.known_keys(
                    obj,
                    ptr,
                    &[
                        "name",
                        "description",
                        "shape",
                        "m_lower",
                        "m_upper",
                        "alpha",
                        "beta",
                        "height",
                    ],
                );
                let q = (
                    num(self, "m_lower"),
                    num(self, "m_upper"),
                    num(self, "alpha"),
                    num(self, "beta"),
                );
                match (q, height) {
                    ((Some(a), Some(b), Some(c), Some(d)), Some(h)) => {
                        match MembershipFunction::trapezoid(a, b, c, d, h) {
                            Ok(mf) => Some(mf),
                            Err(e) => {
                                self.push(ptr, e.to_string());
                                None
                            }
                        }
                    }
                    _ => None,
                }
            }
            Some("sigmoid") => {
                self.known_keys(
                    obj,
                    ptr,
                    &[
                        "name",
                        "description",
                        "shape",
                        "midpoint",
                        "width",
                        "direction",
                        "height",
                    ],
                );
                let midpoint = num(self, "midpoint");
                let width = num(self, "width");
                let direction = match self
                    .required(obj, ptr, "direction")
                    .and_then(|v| self.string(v, &format!("{ptr}/direction")))
                    .as_deref()
                {
                    Some("increasing") => Some(Direction::Increasing),
                    Some("decreasing") => Some(Direction::Decreasing),
                    Some(other) => {
                        self.push(
                            format!("{ptr}/direction"),
                            format!("`{other}` is not one of: increasing, decreasing"),
                        );
                        None
                    }
                    None => None,
                };
                match (midpoint, width, direction, height) {
                    (Some(m), Some(w), Some(d), Some(h)) => {
                        match MembershipFunction::sigmoid(m, w, d, h) {
                            Ok(mf) => Some(mf),
                            Err(e) => {
                                self.push(ptr, e.to_string());
                                None
                            }
                        }
                    }
                    _ => None,
                }
            }
            Some(other) => {
                self.push(
                    format!("{ptr}/shape"),
                    format!("`{other}` is not one of: trapezoid, sigmoid"),
                );
                None
            }
            None => None,
        };
        Some((ptr.to_owned(), name?, mf?))
    }

    /// Parsed rules paired with their JSON pointers.
    fn rules(&mut self, obj: &Map<String, Value>) -> Option<Vec<(String, posfis_core::Rule)>> {
        let items = match self.required(obj, "", "rules") {
            Some(Value::Array(items)) => items,
            Some(_) => {
                self.push("/rules", "expected an array of rule strings");
                return None;
            }
            None => return None,
        };
        let mut rules = Vec::new();
        let mut ok = true;
        let mut ordinal = 0;
        for (i, item) in items.iter().enumerate() {
            let ptr = format!("/rules/{i}");
            let Some(text) = self.string(item, &ptr) else {
                ok = false;
                continue;
            };
            let body = strip_comment(&text);
            if body.trim().is_empty() {
                continue;
            }
            if body.contains('\n') {
                self.push(&ptr, "one rule per entry; line breaks are not allowed");
                ok = false;
                continue;
            }
            ordinal += 1;
            match parse_rule_at(body, 1, ordinal) {
                Ok(rule) => rules.push((ptr, rule)),
                Err(e) => {
                    self.push(ptr, format!("rule syntax error at {e}"));
                    ok = false;
                }
            }
        }
        ok.then_some(rules)
    }

    fn evaluation(&mut self, v: &Value) -> Option<EvaluationConfig> {
        let obj = self.object(v, "/evaluation")?;
        self.known_keys(obj, "/evaluation", &["verify_column", "baseline"]);
        let verify_column = match obj.get("verify_column") {
            Some(v) => Some(self.string(v, "/evaluation/verify_column")?),
            None => None,
        };
        let mut baseline = IndexMap::new();
        if let Some(v) = obj.get("baseline") {
            let map = self.object(v, "/evaluation/baseline")?;
            for (k, v) in map {
                let ptr = format!("/evaluation/baseline/{}", escape(k));
                if let Some(x) = self.number(v, &ptr) {
                    match FuzzyDegree::new(x) {
                        Ok(d) => {
                            baseline.insert(k.clone(), d);
                        }
                        Err(e) => self.push(ptr, e.to_string()),
                    }
                }
            }
        }
        Some(EvaluationConfig {
            verify_column,
            baseline,
        })
    }
}
