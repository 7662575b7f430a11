use serde::{Deserialize, Serialize};

/// Piecewise-linear membership shape. Coincident breakpoints give vertical
/// edges, so `Triangular([0, 0, 0.5])` is a left shoulder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipFunction {
    Triangular([f64; 3]),
    Trapezoidal([f64; 4]),
}

impl MembershipFunction {
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            MembershipFunction::Triangular(p) => p,
            MembershipFunction::Trapezoidal(p) => p,
        }
    }

    pub fn is_well_formed(&self) -> bool {
        let p = self.breakpoints();
        p.iter().all(|v| v.is_finite()) && p.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn degree(&self, x: f64) -> f64 {
        let (a, b, c, d) = match *self {
            MembershipFunction::Triangular([a, b, c]) => (a, b, b, c),
            MembershipFunction::Trapezoidal([a, b, c, d]) => (a, b, c, d),
        };
        if x < a || x > d {
            0.0
        } else if x < b {
            (x - a) / (b - a)
        } else if x <= c {
            1.0
        } else {
            (d - x) / (d - c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use MembershipFunction::*;

    #[test]
    fn triangle_values() {
        let t = Triangular([0.0, 0.5, 1.0]);
        assert_eq!(t.degree(0.5), 1.0);
        assert_eq!(t.degree(0.25), 0.5);
        assert_eq!(t.degree(0.75), 0.5);
        assert_eq!(t.degree(0.0), 0.0);
        assert_eq!(t.degree(-0.1), 0.0);
        assert_eq!(t.degree(1.2), 0.0);
    }

    #[test]
    fn shoulders() {
        let left = Triangular([0.0, 0.0, 0.5]);
        assert_eq!(left.degree(0.0), 1.0);
        assert_eq!(left.degree(0.25), 0.5);
        let right = Triangular([0.5, 1.0, 1.0]);
        assert_eq!(right.degree(1.0), 1.0);
        let trap = Trapezoidal([1.0, 2.0, 4.0, 4.0]);
        assert_eq!(trap.degree(1.5), 0.5);
        assert_eq!(trap.degree(3.0), 1.0);
        assert_eq!(trap.degree(4.0), 1.0);
        assert_eq!(trap.degree(4.01), 0.0);
    }

    #[test]
    fn well_formedness() {
        assert!(Triangular([0.0, 0.0, 0.0]).is_well_formed());
        assert!(!Triangular([0.0, 1.0, 0.5]).is_well_formed());
        assert!(!Trapezoidal([0.0, f64::NAN, 1.0, 2.0]).is_well_formed());
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&Triangular([0.0, 0.5, 1.0])).unwrap();
        assert_eq!(json, r#"{"triangular":[0.0,0.5,1.0]}"#);
    }
}
