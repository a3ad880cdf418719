use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::IneqError;
use crate::graph::{Edge, Label};

/// Which of the four triangular forms on `u, v, w`.
///
/// * `PlusUv`: `Δ(u,v;w) = x_uv - x_uw - x_vw`
/// * `PlusWv`: `Δ(w,v;u) = x_wv - x_wu - x_uv`
/// * `PlusUw`: `Δ(u,w;v) = x_uw - x_uv - x_wv`
/// * `AllPlus`: `Δ(u,v,w) = x_uv + x_uw + x_vw - 2`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    PlusUv,
    PlusWv,
    PlusUw,
    AllPlus,
}

impl FormKind {
    pub const ALL: [FormKind; 4] = [
        FormKind::PlusUv,
        FormKind::PlusWv,
        FormKind::PlusUw,
        FormKind::AllPlus,
    ];

    /// Coefficient of `x_uv` in the form.
    pub fn uv_sign(self) -> i64 {
        match self {
            FormKind::PlusUv | FormKind::AllPlus => 1,
            FormKind::PlusWv | FormKind::PlusUw => -1,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            FormKind::PlusUv => "uv.w",
            FormKind::PlusWv => "wv.u",
            FormKind::PlusUw => "uw.v",
            FormKind::AllPlus => "uvw",
        }
    }

    /// The forms that cancel an eliminated coefficient of the given sign.
    pub fn cancelling(sign: i64) -> &'static [FormKind] {
        match sign.signum() {
            1 => &[FormKind::PlusWv, FormKind::PlusUw],
            -1 => &[FormKind::PlusUv, FormKind::AllPlus],
            _ => &FormKind::ALL,
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FormKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| format!("unknown triangular form {s:?}"))
    }
}

/// Form selection in a plan entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormChoice {
    /// `Δ(u,v;w)` when `a_uv <= 0`, `Δ(u,w;v)` when `a_uv > 0`.
    Canonical,
    Explicit(FormKind),
}

impl FormChoice {
    pub fn token(self) -> &'static str {
        match self {
            FormChoice::Canonical => "canonical",
            FormChoice::Explicit(k) => k.token(),
        }
    }
}

impl fmt::Display for FormChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FormChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "canonical" {
            Ok(FormChoice::Canonical)
        } else {
            s.parse().map(FormChoice::Explicit)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularForm {
    pub kind: FormKind,
    pub u: Label,
    pub v: Label,
    pub w: Label,
}

/// `Σ coeffs[e] x_e <= rhs`, the inequality `Δ <= 0` written out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormExpansion {
    pub coeffs: BTreeMap<Edge, i64>,
    pub rhs: i64,
}

impl FormExpansion {
    /// Value of `Δ` at the cut vector of `s`.
    pub fn evaluate(&self, s: &crate::graph::NodeSet) -> i64 {
        let lhs: i64 = self
            .coeffs
            .iter()
            .filter(|(e, _)| s.contains(e.lo()) != s.contains(e.hi()))
            .map(|(_, c)| c)
            .sum();
        lhs - self.rhs
    }
}

impl TriangularForm {
    pub fn new(kind: FormKind, u: Label, v: Label, w: Label) -> Self {
        TriangularForm { kind, u, v, w }
    }

    pub fn expand(&self) -> Result<FormExpansion, IneqError> {
        let (u, v, w) = (&self.u, &self.v, &self.w);
        if u == v || u == w || v == w {
            return Err(IneqError::RepeatedFormNode);
        }
        let uv = Edge::new(u.clone(), v.clone())?;
        let uw = Edge::new(u.clone(), w.clone())?;
        let vw = Edge::new(v.clone(), w.clone())?;
        let (c_uv, c_uw, c_vw, rhs) = match self.kind {
            FormKind::PlusUv => (1, -1, -1, 0),
            FormKind::PlusWv => (-1, -1, 1, 0),
            FormKind::PlusUw => (-1, 1, -1, 0),
            FormKind::AllPlus => (1, 1, 1, 2),
        };
        let coeffs = [(uv, c_uv), (uw, c_uw), (vw, c_vw)].into_iter().collect();
        Ok(FormExpansion { coeffs, rhs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{label, node_set};

    fn form(kind: FormKind, u: &str, v: &str, w: &str) -> TriangularForm {
        TriangularForm::new(kind, label(u), label(v), label(w))
    }

    fn coeff(x: &FormExpansion, a: &str, b: &str) -> i64 {
        x.coeffs[&Edge::new(label(a), label(b)).unwrap()]
    }

    #[test]
    fn delta_1_6_2() {
        // edge 12 eliminated via w = 6 with Δ(1,6;2) = Δ(u,w;v)
        let x = form(FormKind::PlusUw, "1", "2", "6").expand().unwrap();
        assert_eq!(coeff(&x, "1", "6"), 1);
        assert_eq!(coeff(&x, "1", "2"), -1);
        assert_eq!(coeff(&x, "2", "6"), -1);
        assert_eq!(x.rhs, 0);
    }

    #[test]
    fn delta_2_3_8_all_plus() {
        let x = form(FormKind::AllPlus, "2", "3", "8").expand().unwrap();
        assert_eq!(coeff(&x, "2", "3"), 1);
        assert_eq!(coeff(&x, "2", "8"), 1);
        assert_eq!(coeff(&x, "3", "8"), 1);
        assert_eq!(x.rhs, 2);
    }

    #[test]
    fn delta_w_v_u() {
        // Δ(2,6;1) written as Δ(w,v;u) with u = 1, v = 2, w = 6
        let x = form(FormKind::PlusWv, "1", "2", "6").expand().unwrap();
        assert_eq!(coeff(&x, "2", "6"), 1);
        assert_eq!(coeff(&x, "1", "6"), -1);
        assert_eq!(coeff(&x, "1", "2"), -1);
    }

    #[test]
    fn evaluate_at_cuts() {
        let x = form(FormKind::PlusUv, "u", "v", "w").expand().unwrap();
        assert_eq!(x.evaluate(&node_set(["w"])), -2);
        assert_eq!(x.evaluate(&node_set::<_, &str>([])), 0);
    }

    #[test]
    fn all_forms_valid_on_triangle() {
        let subsets: Vec<Vec<&str>> = vec![
            vec![],
            vec!["u"],
            vec!["v"],
            vec!["w"],
            vec!["u", "v"],
            vec!["u", "w"],
            vec!["v", "w"],
            vec!["u", "v", "w"],
        ];
        for kind in FormKind::ALL {
            let x = form(kind, "u", "v", "w").expand().unwrap();
            for s in &subsets {
                assert!(x.evaluate(&node_set(s.clone())) <= 0, "{kind} at {s:?}");
            }
        }
    }

    #[test]
    fn repeated_node_rejected() {
        assert!(matches!(
            form(FormKind::PlusUv, "1", "1", "2").expand(),
            Err(IneqError::RepeatedFormNode)
        ));
    }

    #[test]
    fn tokens_round_trip() {
        for k in FormKind::ALL {
            assert_eq!(k.token().parse::<FormKind>().unwrap(), k);
            assert_eq!(
                k.token().parse::<FormChoice>().unwrap(),
                FormChoice::Explicit(k)
            );
        }
        assert_eq!("canonical".parse::<FormChoice>().unwrap(), FormChoice::Canonical);
        assert!("uv".parse::<FormChoice>().is_err());
    }

    #[test]
    fn cancelling_forms_cancel() {
        for sign in [-1i64, 1] {
            for k in FormKind::cancelling(sign) {
                assert_eq!(sign + k.uv_sign(), 0);
            }
        }
    }
}
