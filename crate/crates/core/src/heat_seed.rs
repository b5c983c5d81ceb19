//! Positive closed-form solutions of the heat equation `ω_t = ω_xx`.
//!
//! Each seed carries hand-coded partial derivatives and an x-antiderivative
//! `W` normalised so that `W_t = ω_x` (the integration "constant" in time is
//! zero). That normalisation is what makes the drift construction in
//! [`crate::drift`] close.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Rect, ScalarField2D};
use crate::jet::Jet;

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    /// `x² + 2t + B`
    Poly { b: f64 },
    /// `exp(kx + k²t)`
    Exp { k: f64 },
    Const,
    Sum(Vec<(HeatSolution, f64)>),
}

/// A positive heat-equation solution with analytic derivatives and
/// antiderivative.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatSolution {
    kind: Kind,
    positivity: Rect,
}

/// `ω = x² + 2t + B`.
pub fn make_poly_seed(b: f64) -> Result<HeatSolution> {
    if !b.is_finite() || b < 0.0 {
        return Err(Error::parameter(
            "B",
            format!("poly seed needs B >= 0 for positivity, got {b}"),
        ));
    }
    // B = 0 vanishes at the origin of the t = 0 line, so only t > 0 is kept.
    let t_min = if b == 0.0 { f64::MIN_POSITIVE } else { 0.0 };
    Ok(HeatSolution {
        kind: Kind::Poly { b },
        positivity: Rect::from_time(t_min),
    })
}

/// `ω = exp(kx + k²t)`, positive everywhere.
pub fn make_exp_seed(k: f64) -> Result<HeatSolution> {
    if !k.is_finite() || k == 0.0 {
        return Err(Error::parameter(
            "k",
            "exp seed needs a finite nonzero k; use the const seed for k = 0",
        ));
    }
    Ok(HeatSolution {
        kind: Kind::Exp { k },
        positivity: Rect::ALL,
    })
}

/// `ω ≡ 1`.
pub fn make_const_seed() -> HeatSolution {
    HeatSolution {
        kind: Kind::Const,
        positivity: Rect::ALL,
    }
}

/// Positive linear combination of seeds.
pub fn combine_seeds(seeds: &[HeatSolution], weights: &[f64]) -> Result<HeatSolution> {
    if seeds.is_empty() {
        return Err(Error::parameter("seeds", "need at least one seed"));
    }
    if seeds.len() != weights.len() {
        return Err(Error::parameter(
            "weights",
            format!("{} seeds but {} weights", seeds.len(), weights.len()),
        ));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::parameter(
            "weights",
            format!("weights must be positive, got {w}"),
        ));
    }
    let positivity = seeds
        .iter()
        .map(|s| s.positivity)
        .fold(Rect::ALL, |acc, r| acc.intersect(&r));
    if positivity.is_empty() {
        return Err(Error::parameter(
            "seeds",
            "positivity domains of the combined seeds do not intersect",
        ));
    }
    Ok(HeatSolution {
        kind: Kind::Sum(seeds.iter().cloned().zip(weights.iter().copied()).collect()),
        positivity,
    })
}

impl HeatSolution {
    pub fn positivity_domain(&self) -> Rect {
        self.positivity
    }

    /// `B` of a polynomial seed.
    pub fn poly_offset(&self) -> Option<f64> {
        match self.kind {
            Kind::Poly { b } => Some(b),
            _ => None,
        }
    }

    /// True when `ln ω` is linear in `x`, so `f'' ≡ 0` and the partner
    /// potential equals `c/2`.
    pub fn is_log_linear(&self) -> bool {
        matches!(self.kind, Kind::Const | Kind::Exp { .. })
    }

    /// Closed-form `∂x^i ∂t^j ω`.
    pub fn derivative(&self, i: usize, j: usize, x: f64, t: f64) -> f64 {
        match &self.kind {
            Kind::Poly { b } => match (i, j) {
                (0, 0) => x * x + 2.0 * t + b,
                (1, 0) => 2.0 * x,
                (2, 0) => 2.0,
                (0, 1) => 2.0,
                _ => 0.0,
            },
            Kind::Exp { k } => k.powi((i + 2 * j) as i32) * (k * x + k * k * t).exp(),
            Kind::Const => {
                if i == 0 && j == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Kind::Sum(terms) => terms
                .iter()
                .map(|(s, w)| w * s.derivative(i, j, x, t))
                .sum(),
        }
    }

    /// `∫ ω dx` with the time normalisation `W_t = ω_x`.
    pub fn antiderivative_x(&self, x: f64, t: f64) -> f64 {
        match &self.kind {
            Kind::Poly { b } => x * x * x / 3.0 + 2.0 * t * x + b * x,
            Kind::Exp { k } => (k * x + k * k * t).exp() / k,
            Kind::Const => x,
            Kind::Sum(terms) => terms
                .iter()
                .map(|(s, w)| w * s.antiderivative_x(x, t))
                .sum(),
        }
    }

    /// Jet of the antiderivative, assembled from `W_x = ω` and `W_t = ω_x`.
    pub fn antiderivative_jet(&self, x: f64, t: f64, order: usize) -> Jet {
        Jet::from_derivatives(order, |i, j| match (i, j) {
            (0, 0) => self.antiderivative_x(x, t),
            (0, j) => self.derivative(1, j - 1, x, t),
            (i, j) => self.derivative(i - 1, j, x, t),
        })
    }
}

impl ScalarField2D for HeatSolution {
    fn name(&self) -> String {
        format!("seed {self}")
    }

    fn domain(&self) -> Rect {
        self.positivity
    }

    fn jet(&self, x: f64, t: f64, order: usize) -> Jet {
        Jet::from_derivatives(order, |i, j| self.derivative(i, j, x, t))
    }

    fn eval(&self, x: f64, t: f64) -> f64 {
        self.derivative(0, 0, x, t)
    }
}

impl fmt::Display for HeatSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Poly { b } => write!(f, "poly:B={b}"),
            Kind::Exp { k } => write!(f, "exp:k={k}"),
            Kind::Const => write!(f, "const"),
            Kind::Sum(terms) => {
                write!(f, "sum:(")?;
                for (n, (s, w)) in terms.iter().enumerate() {
                    if n > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{s}*{w}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses `poly:B=<v>`, `exp:k=<v>`, `const` and
/// `sum:(<spec>*<w>+<spec>*<w>...)` (`,` also separates terms).
impl FromStr for HeatSolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SeedParser { src: s, pos: 0 };
        let seed = p.seed()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(seed)
    }
}

struct SeedParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> SeedParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn token(&self) -> String {
        let rest = self.rest();
        if rest.is_empty() {
            return "<end of input>".to_string();
        }
        rest.split(|c: char| matches!(c, '*' | '+' | ',' | ')' | '('))
            .next()
            .filter(|s| !s.is_empty())
            .unwrap_or(&rest[..rest.chars().next().map_or(0, char::len_utf8)])
            .to_string()
    }

    fn error(&self, reason: &str) -> Error {
        Error::SeedParse {
            token: self.token(),
            reason: reason.to_string(),
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{lit}`")))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        while end < bytes.len() {
            let c = bytes[end];
            let sign_ok = (c == b'+' || c == b'-')
                && (end == 0 || matches!(bytes[end - 1], b'e' | b'E'));
            if c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E') || sign_ok {
                end += 1;
            } else {
                break;
            }
        }
        let text = &self.rest()[..end];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos += end;
                Ok(v)
            }
            _ => Err(self.error("expected a finite number")),
        }
    }

    fn seed(&mut self) -> Result<HeatSolution> {
        self.skip_ws();
        if self.eat("poly") {
            self.expect(":")?;
            self.expect("B")?;
            self.expect("=")?;
            let start = self.pos;
            let b = self.number()?;
            make_poly_seed(b).map_err(|e| Error::SeedParse {
                token: self.src[start..self.pos].trim().to_string(),
                reason: e.to_string(),
            })
        } else if self.eat("exp") {
            self.expect(":")?;
            self.expect("k")?;
            self.expect("=")?;
            let start = self.pos;
            let k = self.number()?;
            make_exp_seed(k).map_err(|e| Error::SeedParse {
                token: self.src[start..self.pos].trim().to_string(),
                reason: e.to_string(),
            })
        } else if self.eat("const") {
            Ok(make_const_seed())
        } else if self.eat("sum") {
            self.expect(":")?;
            self.expect("(")?;
            let mut seeds = Vec::new();
            let mut weights = Vec::new();
            loop {
                seeds.push(self.seed()?);
                self.expect("*")?;
                let start = self.pos;
                let w = self.number()?;
                if w <= 0.0 {
                    return Err(Error::SeedParse {
                        token: self.src[start..self.pos].trim().to_string(),
                        reason: "sum weights must be positive".to_string(),
                    });
                }
                weights.push(w);
                if self.eat(")") {
                    break;
                }
                if !(self.eat("+") || self.eat(",")) {
                    return Err(self.error("expected `+`, `,` or `)`"));
                }
                // `,+` is accepted as a single separator
                self.eat("+");
            }
            combine_seeds(&seeds, &weights)
        } else {
            Err(self.error("unknown seed kind (expected poly, exp, const or sum)"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_seed_values() {
        let w = make_poly_seed(0.0).unwrap();
        assert_eq!(w.eval(1.0, 1.0), 3.0);
        assert!((w.antiderivative_x(1.0, 1.0) - 7.0 / 3.0).abs() < 1e-15);
        let w5 = make_poly_seed(5.0).unwrap();
        for &(x, t) in &[(0.0, 0.0), (-3.0, 2.5), (7.0, 0.1)] {
            assert_eq!(w5.dt(x, t) - w5.dxx(x, t), 0.0);
        }
        assert_eq!(w5.dx(1.5, 0.0), 3.0);
    }

    #[test]
    fn poly_seed_rejects_negative_b() {
        let err = make_poly_seed(-1.0).unwrap_err();
        assert!(err.to_string().contains("B >= 0"));
    }

    #[test]
    fn poly_seed_positivity_domain() {
        assert!(make_poly_seed(0.0).unwrap().positivity_domain().t_min > 0.0);
        assert_eq!(make_poly_seed(2.0).unwrap().positivity_domain().t_min, 0.0);
    }

    #[test]
    fn exp_seed_values() {
        let w = make_exp_seed(1.0).unwrap();
        assert_eq!(w.eval(0.0, 0.0), 1.0);
        assert!((w.dxx(0.4, 0.3) - w.dt(0.4, 0.3)).abs() < 1e-15);
        let w2 = make_exp_seed(2.0).unwrap();
        for &(x, t) in &[(0.0, 0.0), (-1.0, 0.5), (0.3, -0.2)] {
            assert!((w2.dt(x, t) / w2.eval(x, t) - 4.0).abs() < 1e-14);
        }
        assert!(make_exp_seed(0.0).is_err());
    }

    #[test]
    fn const_seed_values() {
        let w = make_const_seed();
        assert_eq!(w.eval(3.0, 7.0), 1.0);
        assert_eq!(w.dx(3.0, 7.0), 0.0);
        assert_eq!(w.antiderivative_x(2.0, 0.0), 2.0);
    }

    #[test]
    fn combined_seeds() {
        let c = combine_seeds(&[make_const_seed()], &[2.0]).unwrap();
        assert_eq!(c.eval(0.3, 0.4), 2.0);
        let c = combine_seeds(&[make_poly_seed(0.0).unwrap(), make_const_seed()], &[1.0, 1.0])
            .unwrap();
        assert_eq!(c.eval(0.0, 1.0), 3.0);
        assert!(c.positivity_domain().t_min > 0.0);
        let c = combine_seeds(&[make_exp_seed(1.0).unwrap()], &[1.0]).unwrap();
        assert!((c.dt(0.2, 0.1) - c.dxx(0.2, 0.1)).abs() < 1e-15);
    }

    #[test]
    fn combine_rejects_bad_input() {
        assert!(combine_seeds(&[], &[]).is_err());
        assert!(combine_seeds(&[make_const_seed()], &[0.0]).is_err());
        assert!(combine_seeds(&[make_const_seed()], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn antiderivative_time_normalisation() {
        let seeds = [
            make_poly_seed(1.0).unwrap(),
            make_exp_seed(-1.5).unwrap(),
            make_const_seed(),
        ];
        let h = 1e-5;
        for s in &seeds {
            let (x, t) = (0.7, 0.4);
            let wt = (s.antiderivative_x(x, t + h) - s.antiderivative_x(x, t - h)) / (2.0 * h);
            assert!((wt - s.dx(x, t)).abs() < 1e-8, "{s}");
        }
    }

    #[test]
    fn parse_specs() {
        let s: HeatSolution = "poly:B=1.5".parse().unwrap();
        assert_eq!(s, make_poly_seed(1.5).unwrap());
        let s: HeatSolution = "exp:k=-2".parse().unwrap();
        assert_eq!(s, make_exp_seed(-2.0).unwrap());
        let s: HeatSolution = " const ".parse().unwrap();
        assert_eq!(s, make_const_seed());
        let s: HeatSolution = "sum:(poly:B=0*1,+const*2)".parse().unwrap();
        assert_eq!(s.eval(0.0, 1.0), 4.0);
        let s: HeatSolution = "sum:(exp:k=1*1+exp:k=-1*1e+0)".parse().unwrap();
        assert!((s.eval(0.0, 0.0) - 2.0).abs() < 1e-15);
        let nested: HeatSolution = "sum:(sum:(const*1)*3)".parse().unwrap();
        assert_eq!(nested.eval(5.0, 5.0), 3.0);
        let again: HeatSolution = s.to_string().parse().unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn parse_errors_name_offending_token() {
        let msg = |s: &str| s.parse::<HeatSolution>().unwrap_err().to_string();
        assert!(msg("gauss:w=1").contains("`gauss:w=1`"), "{}", msg("gauss:w=1"));
        assert!(msg("poly:B=-1").contains("`-1`"), "{}", msg("poly:B=-1"));
        assert!(msg("poly:B=abc").contains("`abc`"), "{}", msg("poly:B=abc"));
        assert!(msg("exp:k=0").contains("`0`"));
        assert!(msg("sum:(const*0)").contains("`0`"));
        assert!(msg("const extra").contains("`extra`"));
    }
}
