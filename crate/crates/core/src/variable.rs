use indexmap::IndexMap;

use crate::degree::FuzzyDegree;
use crate::error::VariableError;
use crate::membership::MembershipFunction;

pub const DEFAULT_GRID_POINTS: usize = 201;

/// A named quantity with a bounded universe and a set of fuzzy categories.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    universe_min: f64,
    universe_max: f64,
    grid_points: usize,
    categories: IndexMap<String, MembershipFunction>,
}

impl LinguisticVariable {
    pub fn new<I, S>(
        name: impl Into<String>,
        universe_min: f64,
        universe_max: f64,
        grid_points: usize,
        categories: I,
    ) -> Result<Self, VariableError>
    where
        I: IntoIterator<Item = (S, MembershipFunction)>,
        S: Into<String>,
    {
        let name = name.into();
        if !(universe_min.is_finite() && universe_max.is_finite() && universe_min < universe_max) {
            return Err(VariableError::InvalidUniverse {
                variable: name,
                min: universe_min,
                max: universe_max,
            });
        }
        if grid_points < 2 {
            return Err(VariableError::TooFewGridPoints {
                variable: name,
                points: grid_points,
            });
        }
        let mut map = IndexMap::new();
        for (category, mf) in categories {
            let category = category.into();
            if !mf.touches(universe_min, universe_max) {
                return Err(VariableError::SupportOutsideUniverse {
                    variable: name,
                    category,
                });
            }
            if map.contains_key(&category) {
                return Err(VariableError::DuplicateCategory {
                    variable: name,
                    category,
                });
            }
            map.insert(category, mf);
        }
        Ok(LinguisticVariable {
            name,
            universe_min,
            universe_max,
            grid_points,
            categories: map,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        (self.universe_min, self.universe_max)
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// Same variable on a different grid.
    pub fn with_grid_points(&self, grid_points: usize) -> Result<Self, VariableError> {
        if grid_points < 2 {
            return Err(VariableError::TooFewGridPoints {
                variable: self.name.clone(),
                points: grid_points,
            });
        }
        Ok(LinguisticVariable {
            grid_points,
            ..self.clone()
        })
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, &MembershipFunction)> {
        self.categories.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.categories.keys().map(String::as_str)
    }

    pub fn category(&self, category: &str) -> Result<&MembershipFunction, VariableError> {
        self.categories
            .get(category)
            .ok_or_else(|| VariableError::UnknownCategory {
                variable: self.name.clone(),
                category: category.to_owned(),
            })
    }

    pub fn has_category(&self, category: &str) -> bool {
        self.categories.contains_key(category)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.universe_min, self.universe_max)
    }

    /// Membership of `x` in `category`, with `x` clamped to the universe.
    pub fn membership(&self, category: &str, x: f64) -> Result<FuzzyDegree, VariableError> {
        let mf = self.category(category)?;
        mf.eval(self.clamp(x))
            .map_err(|source| VariableError::Membership {
                variable: self.name.clone(),
                source,
            })
    }

    /// Uniform grid over the universe, both endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.universe_min, self.universe_max, self.grid_points)
    }

    pub fn sample_on_grid(&self, category: &str) -> Result<Vec<FuzzyDegree>, VariableError> {
        let mf = self.category(category)?;
        Ok(sample(mf, &self.grid()))
    }
}

pub(crate) fn sample(mf: &MembershipFunction, grid: &[f64]) -> Vec<FuzzyDegree> {
    grid.iter()
        .map(|&x| mf.eval(x).expect("grid nodes are finite"))
        .collect()
}

pub fn uniform_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    debug_assert!(points >= 2);
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                min + (max - min) * (i as f64) / last
            }
        })
        .collect()
}

pub fn sample_on_grid(
    var: &LinguisticVariable,
    category: &str,
) -> Result<Vec<FuzzyDegree>, VariableError> {
    var.sample_on_grid(category)
}
