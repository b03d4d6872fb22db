use std::collections::BTreeMap;
use std::fmt;

use super::{ArithOp, BitOp, BoolExpr, CmpOp, NumExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus by zero")]
    ModulusByZero,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("arithmetic overflow in `{0}`")]
    Overflow(&'static str),
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// Variable lookup used by the evaluator.
pub trait Env<V> {
    fn value(&self, var: &V) -> Option<i64>;
}

/// Resolved expressions index straight into a value slice.
impl Env<usize> for [i64] {
    fn value(&self, var: &usize) -> Option<i64> {
        self.get(*var).copied()
    }
}

impl Env<usize> for Vec<i64> {
    fn value(&self, var: &usize) -> Option<i64> {
        self.get(*var).copied()
    }
}

/// Total map from variable names to values over a fixed domain.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Valuation(BTreeMap<String, i64>);

impl Valuation {
    pub fn new<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        Valuation(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.get(name).copied()
    }

    /// Updates a variable already in the domain; returns `false` (and changes
    /// nothing) for names outside it.
    pub fn set(&mut self, name: &str, value: i64) -> bool {
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl Env<String> for Valuation {
    fn value(&self, var: &String) -> Option<i64> {
        self.get(var)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

fn lookup<V: fmt::Display, E: Env<V> + ?Sized>(env: &E, var: &V) -> Result<i64, EvalError> {
    env.value(var).ok_or_else(|| EvalError::Unbound(var.to_string()))
}

fn pow(base: i64, exp: i64) -> Result<i64, EvalError> {
    if exp < 0 {
        return Err(EvalError::NegativeExponent(exp));
    }
    match (base, exp) {
        (_, 0) => Ok(1),
        (0 | 1, _) => Ok(base),
        (-1, e) => Ok(if e % 2 == 0 { 1 } else { -1 }),
        _ => u32::try_from(exp)
            .ok()
            .and_then(|e| base.checked_pow(e))
            .ok_or(EvalError::Overflow("**")),
    }
}

/// Evaluates a numeric expression over 64-bit two's-complement integers.
/// Overflow is an error rather than wrapping.
pub fn eval_num<V, E>(e: &NumExpr<V>, env: &E) -> Result<i64, EvalError>
where
    V: fmt::Display,
    E: Env<V> + ?Sized,
{
    Ok(match e {
        NumExpr::Const(c) => *c,
        NumExpr::Var(v) => lookup(env, v)?,
        NumExpr::Neg(a) => eval_num(a, env)?.checked_neg().ok_or(EvalError::Overflow("-"))?,
        NumExpr::Not(a) => !eval_num(a, env)?,
        NumExpr::Arith(op, l, r) => {
            let (a, b) = (eval_num(l, env)?, eval_num(r, env)?);
            match op {
                ArithOp::Add => a.checked_add(b).ok_or(EvalError::Overflow("+"))?,
                ArithOp::Sub => a.checked_sub(b).ok_or(EvalError::Overflow("-"))?,
                ArithOp::Mul => a.checked_mul(b).ok_or(EvalError::Overflow("*"))?,
                ArithOp::Div if b == 0 => return Err(EvalError::DivisionByZero),
                ArithOp::Div => a.checked_div(b).ok_or(EvalError::Overflow("/"))?,
                ArithOp::Rem if b == 0 => return Err(EvalError::ModulusByZero),
                ArithOp::Rem => a.checked_rem(b).ok_or(EvalError::Overflow("%"))?,
                ArithOp::Pow => pow(a, b)?,
            }
        }
        NumExpr::Bit(op, l, r) => {
            let (a, b) = (eval_num(l, env)?, eval_num(r, env)?);
            match op {
                BitOp::Or => a | b,
                BitOp::And => a & b,
                BitOp::Xor => a ^ b,
            }
        }
        NumExpr::Int(b) => i64::from(eval_bool(b, env)?),
    })
}

/// Evaluates a Boolean expression; `&&` and `||` short-circuit, so an
/// arithmetic error in an unevaluated operand is not reported.
pub fn eval_bool<V, E>(e: &BoolExpr<V>, env: &E) -> Result<bool, EvalError>
where
    V: fmt::Display,
    E: Env<V> + ?Sized,
{
    Ok(match e {
        BoolExpr::True => true,
        BoolExpr::False => false,
        BoolExpr::Var(v) => lookup(env, v)? != 0,
        BoolExpr::Not(b) => !eval_bool(b, env)?,
        BoolExpr::And(l, r) => eval_bool(l, env)? && eval_bool(r, env)?,
        BoolExpr::Or(l, r) => eval_bool(l, env)? || eval_bool(r, env)?,
        BoolExpr::Cmp(op, l, r) => {
            let (a, b) = (eval_num(l, env)?, eval_num(r, env)?);
            match op {
                CmpOp::Eq => a == b,
                CmpOp::Ge => a >= b,
                CmpOp::Gt => a > b,
                CmpOp::Le => a <= b,
                CmpOp::Lt => a < b,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_boolean, parse_numeric};
    use proptest::prelude::*;

    fn num(text: &str, env: &Valuation) -> Result<i64, EvalError> {
        eval_num(&parse_numeric(text).unwrap(), env)
    }

    fn boolean(text: &str, env: &Valuation) -> Result<bool, EvalError> {
        eval_bool(&parse_boolean(text).unwrap(), env)
    }

    fn fig1_initial() -> Valuation {
        Valuation::new([("u", 0), ("v", 1), ("w", 1), ("x", 0), ("y", 0), ("z", 0)])
    }

    #[test]
    fn operation_examples() {
        let empty = Valuation::default();
        assert_eq!(num("NOT(0)", &empty), Ok(-1));
        assert_eq!(num("INT(5 > 3)", &empty), Ok(1));
        assert_eq!(num("INT(5 < 3)", &empty), Ok(0));
        assert_eq!(num("7 % 3", &empty), Ok(1));
        assert_eq!(boolean("u == 0 && z == 0", &fig1_initial()), Ok(true));
        assert_eq!(boolean("false || true", &empty), Ok(true));
        let env = Valuation::new([("v", 2)]);
        assert_eq!(boolean("v", &env), Ok(true));
        assert_eq!(boolean("!v", &Valuation::new([("v", 0)])), Ok(true));
    }

    #[test]
    fn c_style_division_and_remainder() {
        let e = Valuation::default();
        assert_eq!(num("-7 / 2", &e), Ok(-3));
        assert_eq!(num("7 / -2", &e), Ok(-3));
        assert_eq!(num("-7 % 3", &e), Ok(-1));
        assert_eq!(num("7 % -3", &e), Ok(1));
    }

    #[test]
    fn bitwise_functions_use_twos_complement() {
        let e = Valuation::default();
        assert_eq!(num("AND(-1, 12)", &e), Ok(12));
        assert_eq!(num("OR(5, 10)", &e), Ok(15));
        assert_eq!(num("XOR(-1, 0)", &e), Ok(-1));
        assert_eq!(num("NOT(-6)", &e), Ok(5));
    }

    #[test]
    fn exponentiation() {
        let e = Valuation::default();
        assert_eq!(num("2 ** 10", &e), Ok(1024));
        assert_eq!(num("(-1) ** 9999999999", &e), Ok(-1));
        assert_eq!(num("0 ** 0", &e), Ok(1));
        assert_eq!(num("2 ** -1", &e), Err(EvalError::NegativeExponent(-1)));
        assert_eq!(num("2 ** 63", &e), Err(EvalError::Overflow("**")));
    }

    #[test]
    fn arithmetic_errors() {
        let e = Valuation::new([("x", 0)]);
        assert_eq!(num("1 / x", &e), Err(EvalError::DivisionByZero));
        assert_eq!(num("1 % x", &e), Err(EvalError::ModulusByZero));
        assert_eq!(num("9223372036854775807 + 1", &e), Err(EvalError::Overflow("+")));
        assert_eq!(num("-(-9223372036854775808)", &e), Err(EvalError::Overflow("-")));
        assert_eq!(num("-9223372036854775808 / -1", &e), Err(EvalError::Overflow("/")));
        assert_eq!(num("y + 1", &e), Err(EvalError::Unbound("y".into())));
    }

    #[test]
    fn short_circuit_skips_right_operand() {
        let e = Valuation::new([("x", 0)]);
        assert!(parse_boolean("x != 0").is_err());
        assert_eq!(boolean("x == 1 && 1 / x > 0", &e), Ok(false));
        assert_eq!(boolean("x == 0 || 1 / x > 0", &e), Ok(true));
    }

    #[test]
    fn valuation_domain_is_fixed() {
        let mut v = Valuation::new([("a", 1)]);
        assert!(v.set("a", 4));
        assert!(!v.set("b", 4));
        assert_eq!(v.len(), 1);
        assert_eq!(v.get("a"), Some(4));
        assert_eq!(v.to_string(), "{a=4}");
    }

    #[test]
    fn resolved_expression_reads_slots() {
        let names = ["u", "z"];
        let e = parse_boolean("u == 0 && z == 0").unwrap();
        let resolved = e
            .try_map_vars(&mut |v: &String| names.iter().position(|n| n == v).ok_or(()))
            .unwrap();
        assert_eq!(eval_bool(&resolved, &[0i64, 0][..]), Ok(true));
        assert_eq!(eval_bool(&resolved, &[0i64, 1][..]), Ok(false));
    }

    fn small_num() -> impl Strategy<Value = NumExpr> {
        let leaf = prop_oneof![
            (-1000i64..1000).prop_map(NumExpr::Const),
            prop::sample::select(vec!["a", "b", "c"]).prop_map(|s| NumExpr::Var(s.to_string())),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| NumExpr::arith(ArithOp::Add, l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| NumExpr::arith(ArithOp::Sub, l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| NumExpr::bit(BitOp::Or, l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| NumExpr::bit(BitOp::Xor, l, r)),
                inner.clone().prop_map(|e| NumExpr::Not(Box::new(e))),
                inner.prop_map(|e| NumExpr::Neg(Box::new(e))),
            ]
        })
    }

    fn env() -> impl Strategy<Value = Valuation> {
        (any::<i32>(), any::<i32>(), any::<i32>())
            .prop_map(|(a, b, c)| Valuation::new([("a", a as i64), ("b", b as i64), ("c", c as i64)]))
    }

    proptest! {
        #[test]
        fn bitwise_laws(a in small_num(), env in env()) {
            let and_self = NumExpr::bit(BitOp::And, a.clone(), a.clone());
            let xor_self = NumExpr::bit(BitOp::Xor, a.clone(), a.clone());
            let not_not = NumExpr::Not(Box::new(NumExpr::Not(Box::new(a.clone()))));
            let value = eval_num(&a, &env);
            prop_assert_eq!(eval_num(&and_self, &env), value.clone());
            prop_assert_eq!(eval_num(&not_not, &env), value.clone());
            if value.is_ok() {
                prop_assert_eq!(eval_num(&xor_self, &env), Ok(0));
            }
        }

        #[test]
        fn int_of_bool_is_indicator(l in small_num(), r in small_num(), env in env()) {
            let b = BoolExpr::cmp(CmpOp::Le, l, r);
            let as_int = eval_num(&NumExpr::Int(Box::new(b.clone())), &env);
            match eval_bool(&b, &env) {
                Ok(truth) => prop_assert_eq!(as_int, Ok(i64::from(truth))),
                Err(e) => prop_assert_eq!(as_int, Err(e)),
            }
        }

        #[test]
        fn evaluation_is_pure(a in small_num(), env in env()) {
            prop_assert_eq!(eval_num(&a, &env), eval_num(&a, &env));
        }
    }
}
