//! Parametric model families.
//!
//! * `toggle_chain(n)`: `n` modules `T<i>`, each with place `on<i>` (marked),
//!   variable `x<i> = 0` and a self-loop `flip<i>` assigning `x<i> := 1 - x<i>`.
//!   The modules are independent, so there are `2^n` states.
//! * `philosophers(n)`, `n >= 2`: module `P<i>` has places `think<i>`
//!   (marked), `one<i>` and `eat<i>` and shares fork variables `f<i>` (left)
//!   and `f<(i+1) mod n>` (right), all starting at 0. Transitions:
//!   `take_left<i>: think -> one` when the left fork is 0, setting it to 1;
//!   `take_right<i>: one -> eat` when the right fork is 0, setting it to 1;
//!   `release<i>: eat -> think` resetting both forks. The all-`one` state is
//!   a deadlock.
//! * `ring_arbiter(n)`: module `A<i>` has places `idle<i>` (marked), `req<i>`
//!   and `crit<i>` and shares token variables `tok<i>` and
//!   `tok<(i+1) mod n>`; `tok0 = 1`, the rest 0. Transitions:
//!   `request<i>: idle -> req`; `enter<i>: req -> crit` when `tok<i> == 1`;
//!   `leave<i>: crit -> idle`; and, for `n > 1`, `pass<i>: idle -> idle` when
//!   `tok<i> == 1`, moving the token to the next cell.

use std::fmt;
use std::str::FromStr;

use crate::expr::{parse_boolean, parse_numeric, BoolExpr, NumExpr};
use crate::model::{LpnModule, LpnSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[value(name = "toggle_chain")]
    ToggleChain,
    #[value(name = "philosophers")]
    Philosophers,
    #[value(name = "ring_arbiter")]
    RingArbiter,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::ToggleChain, Family::Philosophers, Family::RingArbiter];

    pub fn name(self) -> &'static str {
        match self {
            Family::ToggleChain => "toggle_chain",
            Family::Philosophers => "philosophers",
            Family::RingArbiter => "ring_arbiter",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::Philosophers => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, GenerateError> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| GenerateError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("unknown model family `{0}`")]
    UnknownFamily(String),
    #[error("{family} needs n >= {min}, got {n}")]
    OutOfRange { family: Family, min: usize, n: usize },
}

/// Builds family member `n`.
pub fn generate(family: Family, n: usize) -> Result<LpnSystem, GenerateError> {
    if n < family.min_n() {
        return Err(GenerateError::OutOfRange { family, min: family.min_n(), n });
    }
    Ok(match family {
        Family::ToggleChain => toggle_chain(n),
        Family::Philosophers => philosophers(n),
        Family::RingArbiter => ring_arbiter(n),
    })
}

fn guard(text: &str) -> Option<BoolExpr> {
    Some(parse_boolean(text).expect("generator guard"))
}

fn assign(pairs: &[(String, &str)]) -> Vec<(String, NumExpr)> {
    pairs.iter().map(|(v, e)| (v.clone(), parse_numeric(e).expect("generator assignment"))).collect()
}

fn compose(modules: Vec<LpnModule>) -> LpnSystem {
    LpnSystem::compose(modules).expect("generated modules compose")
}

fn toggle_chain(n: usize) -> LpnSystem {
    let modules = (0..n)
        .map(|i| {
            let mut m = LpnModule::new(format!("T{i}"));
            let (x, on) = (format!("x{i}"), format!("on{i}"));
            m.add_variable(&x, 0).unwrap();
            m.add_place(&on, true).unwrap();
            m.add_transition(format!("flip{i}"), &[&on], &[&on], None, assign(&[(x.clone(), &format!("1 - {x}"))]))
                .unwrap();
            m
        })
        .collect();
    compose(modules)
}

fn philosophers(n: usize) -> LpnSystem {
    let modules = (0..n)
        .map(|i| {
            let mut m = LpnModule::new(format!("P{i}"));
            let (left, right) = (format!("f{i}"), format!("f{}", (i + 1) % n));
            let (think, one, eat) = (format!("think{i}"), format!("one{i}"), format!("eat{i}"));
            m.add_variable(&left, 0).unwrap();
            m.add_variable(&right, 0).unwrap();
            m.add_place(&think, true).unwrap();
            m.add_place(&one, false).unwrap();
            m.add_place(&eat, false).unwrap();
            m.add_transition(format!("take_left{i}"), &[&think], &[&one], guard(&format!("{left} == 0")), assign(&[(left.clone(), "1")]))
                .unwrap();
            m.add_transition(format!("take_right{i}"), &[&one], &[&eat], guard(&format!("{right} == 0")), assign(&[(right.clone(), "1")]))
                .unwrap();
            m.add_transition(format!("release{i}"), &[&eat], &[&think], None, assign(&[(left.clone(), "0"), (right.clone(), "0")]))
                .unwrap();
            m
        })
        .collect();
    compose(modules)
}

fn ring_arbiter(n: usize) -> LpnSystem {
    let modules = (0..n)
        .map(|i| {
            let mut m = LpnModule::new(format!("A{i}"));
            let (tok, next) = (format!("tok{i}"), format!("tok{}", (i + 1) % n));
            let (idle, req, crit) = (format!("idle{i}"), format!("req{i}"), format!("crit{i}"));
            m.add_variable(&tok, i64::from(i == 0)).unwrap();
            if n > 1 {
                m.add_variable(&next, i64::from(i + 1 == n)).unwrap();
            }
            m.add_place(&idle, true).unwrap();
            m.add_place(&req, false).unwrap();
            m.add_place(&crit, false).unwrap();
            m.add_transition(format!("request{i}"), &[&idle], &[&req], None, vec![]).unwrap();
            m.add_transition(format!("enter{i}"), &[&req], &[&crit], guard(&format!("{tok} == 1")), vec![]).unwrap();
            m.add_transition(format!("leave{i}"), &[&crit], &[&idle], None, vec![]).unwrap();
            if n > 1 {
                m.add_transition(
                    format!("pass{i}"),
                    &[&idle],
                    &[&idle],
                    guard(&format!("{tok} == 1")),
                    assign(&[(tok.clone(), "0"), (next.clone(), "1")]),
                )
                .unwrap();
            }
            m
        })
        .collect();
    compose(modules)
}
