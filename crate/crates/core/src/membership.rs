//! Piecewise-linear membership functions.
//!
//! Two shapes are supported:
//!
//! * a trapezoid given by the quintuple `(m_lower, m_upper, alpha, beta, h)`: a
//!   rising slope over `[m_lower - alpha, m_lower]`, a flat top of height `h`
//!   on `[m_lower, m_upper]` and a falling slope over `[m_upper, m_upper + beta]`.
//!   Singletons, triangles and crisp intervals are special cases.
//! * a linear "sigmoid" given by midpoint, width, direction and height, which
//!   ramps linearly between `midpoint - width/2` and `midpoint + width/2`.
//!
//! Heights below one are kept as given; they encode a ceiling on how strongly
//! any value can belong to the category.

use crate::degree::FuzzyDegree;
use crate::error::MembershipError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    m_lower: f64,
    m_upper: f64,
    alpha: f64,
    beta: f64,
    height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSigmoid {
    midpoint: f64,
    width: f64,
    direction: Direction,
    height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Trapezoid(Trapezoid),
    LinearSigmoid(LinearSigmoid),
}

fn check_finite(name: &'static str, value: f64) -> Result<(), MembershipError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(MembershipError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

fn check_height(height: f64) -> Result<(), MembershipError> {
    check_finite("h", height)?;
    if (0.0..=1.0).contains(&height) {
        Ok(())
    } else {
        Err(MembershipError::InvalidParameter {
            name: "h",
            value: height,
            reason: "height must lie in [0, 1]",
        })
    }
}

fn check_input(x: f64) -> Result<(), MembershipError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(MembershipError::NonFiniteInput(x))
    }
}

impl Trapezoid {
    pub fn new(
        m_lower: f64,
        m_upper: f64,
        alpha: f64,
        beta: f64,
        height: f64,
    ) -> Result<Self, MembershipError> {
        check_finite("m_lower", m_lower)?;
        check_finite("m_upper", m_upper)?;
        check_finite("alpha", alpha)?;
        check_finite("beta", beta)?;
        check_height(height)?;
        if m_lower > m_upper {
            return Err(MembershipError::InvalidParameter {
                name: "m_upper",
                value: m_upper,
                reason: "m_upper must not be below m_lower",
            });
        }
        if alpha < 0.0 {
            return Err(MembershipError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "slope extent must be non-negative",
            });
        }
        if beta < 0.0 {
            return Err(MembershipError::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "slope extent must be non-negative",
            });
        }
        Ok(Trapezoid {
            m_lower,
            m_upper,
            alpha,
            beta,
            height,
        })
    }

    pub fn m_lower(&self) -> f64 {
        self.m_lower
    }

    pub fn m_upper(&self) -> f64 {
        self.m_upper
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Closed support `[m_lower - alpha, m_upper + beta]`.
    pub fn support(&self) -> (f64, f64) {
        (self.m_lower - self.alpha, self.m_upper + self.beta)
    }

    /// Evaluates the quintuple at a finite `x`.
    ///
    /// The flat top is tested first, so a zero-width slope degenerates into a
    /// step whose top edge is closed.
    pub fn eval(&self, x: f64) -> Result<FuzzyDegree, MembershipError> {
        check_input(x)?;
        let h = self.height;
        let foot_left = self.m_lower - self.alpha;
        let foot_right = self.m_upper + self.beta;
        let y = if self.m_lower <= x && x <= self.m_upper {
            h
        } else if foot_left <= x && x < self.m_lower {
            // alpha > 0 here, otherwise the interval is empty
            h * (x - foot_left) / self.alpha
        } else if self.m_upper < x && x <= foot_right {
            h * (foot_right - x) / self.beta
        } else {
            0.0
        };
        Ok(FuzzyDegree::saturating(y.min(self.height)))
    }
}

impl LinearSigmoid {
    pub fn new(
        midpoint: f64,
        width: f64,
        direction: Direction,
        height: f64,
    ) -> Result<Self, MembershipError> {
        check_finite("midpoint", midpoint)?;
        check_finite("width", width)?;
        check_height(height)?;
        if width <= 0.0 {
            return Err(MembershipError::InvalidParameter {
                name: "width",
                value: width,
                reason: "width must be positive",
            });
        }
        Ok(LinearSigmoid {
            midpoint,
            width,
            direction,
            height,
        })
    }

    pub fn midpoint(&self) -> f64 {
        self.midpoint
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn left(&self) -> f64 {
        self.midpoint - self.width / 2.0
    }

    pub fn right(&self) -> f64 {
        self.midpoint + self.width / 2.0
    }

    pub fn eval(&self, x: f64) -> Result<FuzzyDegree, MembershipError> {
        check_input(x)?;
        let (left, right, h, w) = (self.left(), self.right(), self.height, self.width);
        let y = match self.direction {
            Direction::Increasing => {
                if x < left {
                    0.0
                } else if x <= right {
                    h * (x - left) / w
                } else {
                    h
                }
            }
            Direction::Decreasing => {
                if x < left {
                    h
                } else if x <= right {
                    h * (right - x) / w
                } else {
                    0.0
                }
            }
        };
        Ok(FuzzyDegree::saturating(y.min(self.height)))
    }
}

impl MembershipFunction {
    pub fn trapezoid(
        m_lower: f64,
        m_upper: f64,
        alpha: f64,
        beta: f64,
        height: f64,
    ) -> Result<Self, MembershipError> {
        Trapezoid::new(m_lower, m_upper, alpha, beta, height).map(MembershipFunction::Trapezoid)
    }

    pub fn sigmoid(
        midpoint: f64,
        width: f64,
        direction: Direction,
        height: f64,
    ) -> Result<Self, MembershipError> {
        LinearSigmoid::new(midpoint, width, direction, height)
            .map(MembershipFunction::LinearSigmoid)
    }

    pub fn eval(&self, x: f64) -> Result<FuzzyDegree, MembershipError> {
        match self {
            MembershipFunction::Trapezoid(t) => t.eval(x),
            MembershipFunction::LinearSigmoid(s) => s.eval(x),
        }
    }

    pub fn height(&self) -> f64 {
        match self {
            MembershipFunction::Trapezoid(t) => t.height,
            MembershipFunction::LinearSigmoid(s) => s.height,
        }
    }

    /// Whether the function is non-zero somewhere in `[lo, hi]`.
    pub fn touches(&self, lo: f64, hi: f64) -> bool {
        if self.height() <= 0.0 {
            return false;
        }
        match self {
            MembershipFunction::Trapezoid(t) => {
                let (a, b) = t.support();
                a <= hi && b >= lo
            }
            MembershipFunction::LinearSigmoid(s) => match s.direction {
                Direction::Increasing => s.left() < hi,
                Direction::Decreasing => s.right() > lo,
            },
        }
    }
}

pub fn eval_trapezoid(mf: &Trapezoid, x: f64) -> Result<FuzzyDegree, MembershipError> {
    mf.eval(x)
}

pub fn eval_sigmoid(mf: &LinearSigmoid, x: f64) -> Result<FuzzyDegree, MembershipError> {
    mf.eval(x)
}
