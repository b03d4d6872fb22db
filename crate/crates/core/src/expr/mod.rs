//! Guard and assignment expressions.
//!
//! Two mutually recursive grammars: integer-valued [`NumExpr`] and
//! truth-valued [`BoolExpr`]. Both are generic over the variable
//! representation so that parsed expressions (`String` names) can be resolved
//! once into slot indices (`usize`) before the search starts evaluating them
//! millions of times.
//!
//! Concrete syntax, lowest to highest precedence:
//!
//! ```text
//! bool    ::= or
//! or      ::= and ( "||" and )*
//! and     ::= unot ( "&&" unot )*
//! unot    ::= "!" unot | atom
//! atom    ::= "true" | "false" | num cmp num | "(" bool ")" | ident
//! cmp     ::= "==" | ">=" | ">" | "<=" | "<"
//! num     ::= term ( ("+" | "-") term )*
//! term    ::= pow ( ("*" | "/" | "%") pow )*
//! pow     ::= unary ( "**" pow )?
//! unary   ::= "-" unary | primary
//! primary ::= int | ident | "(" num ")"
//!           | "NOT(" num ")" | "OR(" num "," num ")" | "AND(" num "," num ")"
//!           | "XOR(" num "," num ")" | "INT(" bool ")"
//! ```
//!
//! A `-` immediately followed by an integer literal in unary position is read
//! as a negative literal, so every `i64` constant has a spelling.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{eval_bool, eval_num, Env, EvalError, Valuation};
pub use parse::{parse_boolean, parse_numeric, ParseError};

pub(crate) use parse::{Parser, Tok};

/// Binary arithmetic operators of the numeric grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Rem,
}

/// Two's-complement bitwise functions `OR`, `AND`, `XOR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitOp {
    Or,
    And,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ge,
    Gt,
    Le,
    Lt,
}

/// Integer-valued expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NumExpr<V = String> {
    Const(i64),
    Var(V),
    Neg(Box<NumExpr<V>>),
    Arith(ArithOp, Box<NumExpr<V>>, Box<NumExpr<V>>),
    /// Bitwise complement, `NOT(e)`.
    Not(Box<NumExpr<V>>),
    Bit(BitOp, Box<NumExpr<V>>, Box<NumExpr<V>>),
    /// `INT(b)`: 1 if `b` holds, else 0.
    Int(Box<BoolExpr<V>>),
}

/// Truth-valued expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr<V = String> {
    True,
    False,
    /// A bare variable is true iff its value is nonzero.
    Var(V),
    Not(Box<BoolExpr<V>>),
    And(Box<BoolExpr<V>>, Box<BoolExpr<V>>),
    Or(Box<BoolExpr<V>>, Box<BoolExpr<V>>),
    Cmp(CmpOp, Box<NumExpr<V>>, Box<NumExpr<V>>),
}

impl<V> NumExpr<V> {
    pub fn arith(op: ArithOp, lhs: NumExpr<V>, rhs: NumExpr<V>) -> Self {
        NumExpr::Arith(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn bit(op: BitOp, lhs: NumExpr<V>, rhs: NumExpr<V>) -> Self {
        NumExpr::Bit(op, Box::new(lhs), Box::new(rhs))
    }

    /// Rebuilds the expression with every variable passed through `f`.
    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> Result<W, E>) -> Result<NumExpr<W>, E> {
        Ok(match self {
            NumExpr::Const(c) => NumExpr::Const(*c),
            NumExpr::Var(v) => NumExpr::Var(f(v)?),
            NumExpr::Neg(e) => NumExpr::Neg(Box::new(e.try_map_vars(f)?)),
            NumExpr::Arith(op, l, r) => NumExpr::arith(*op, l.try_map_vars(f)?, r.try_map_vars(f)?),
            NumExpr::Not(e) => NumExpr::Not(Box::new(e.try_map_vars(f)?)),
            NumExpr::Bit(op, l, r) => NumExpr::bit(*op, l.try_map_vars(f)?, r.try_map_vars(f)?),
            NumExpr::Int(b) => NumExpr::Int(Box::new(b.try_map_vars(f)?)),
        })
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        match self {
            NumExpr::Const(_) => {}
            NumExpr::Var(v) => f(v),
            NumExpr::Neg(e) | NumExpr::Not(e) => e.for_each_var(f),
            NumExpr::Arith(_, l, r) | NumExpr::Bit(_, l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
            NumExpr::Int(b) => b.for_each_var(f),
        }
    }
}

impl<V: Ord> NumExpr<V> {
    pub fn vars(&self) -> BTreeSet<&V> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            out.insert(v);
        });
        out
    }
}

impl<V> BoolExpr<V> {
    pub fn and(lhs: BoolExpr<V>, rhs: BoolExpr<V>) -> Self {
        BoolExpr::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: BoolExpr<V>, rhs: BoolExpr<V>) -> Self {
        BoolExpr::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn cmp(op: CmpOp, lhs: NumExpr<V>, rhs: NumExpr<V>) -> Self {
        BoolExpr::Cmp(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> Result<W, E>) -> Result<BoolExpr<W>, E> {
        Ok(match self {
            BoolExpr::True => BoolExpr::True,
            BoolExpr::False => BoolExpr::False,
            BoolExpr::Var(v) => BoolExpr::Var(f(v)?),
            BoolExpr::Not(b) => BoolExpr::Not(Box::new(b.try_map_vars(f)?)),
            BoolExpr::And(l, r) => BoolExpr::and(l.try_map_vars(f)?, r.try_map_vars(f)?),
            BoolExpr::Or(l, r) => BoolExpr::or(l.try_map_vars(f)?, r.try_map_vars(f)?),
            BoolExpr::Cmp(op, l, r) => BoolExpr::cmp(*op, l.try_map_vars(f)?, r.try_map_vars(f)?),
        })
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        match self {
            BoolExpr::True | BoolExpr::False => {}
            BoolExpr::Var(v) => f(v),
            BoolExpr::Not(b) => b.for_each_var(f),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
            BoolExpr::Cmp(_, l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
        }
    }
}

impl<V: Ord> BoolExpr<V> {
    pub fn vars(&self) -> BTreeSet<&V> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            out.insert(v);
        });
        out
    }
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Pow => "**",
            ArithOp::Rem => "%",
        }
    }
}

impl BitOp {
    pub fn name(self) -> &'static str {
        match self {
            BitOp::Or => "OR",
            BitOp::And => "AND",
            BitOp::Xor => "XOR",
        }
    }
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
        }
    }
}

// Printing parenthesizes every compound node, so the output always parses
// back to the same tree.
impl<V: fmt::Display> fmt::Display for NumExpr<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumExpr::Const(c) => write!(f, "{c}"),
            NumExpr::Var(v) => write!(f, "{v}"),
            NumExpr::Neg(e) => write!(f, "-({e})"),
            NumExpr::Arith(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            NumExpr::Not(e) => write!(f, "NOT({e})"),
            NumExpr::Bit(op, l, r) => write!(f, "{}({l}, {r})", op.name()),
            NumExpr::Int(b) => write!(f, "INT({b})"),
        }
    }
}

impl<V: fmt::Display> fmt::Display for BoolExpr<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::True => write!(f, "true"),
            BoolExpr::False => write!(f, "false"),
            BoolExpr::Var(v) => write!(f, "{v}"),
            BoolExpr::Not(b) => write!(f, "!({b})"),
            BoolExpr::And(l, r) => write!(f, "({l} && {r})"),
            BoolExpr::Or(l, r) => write!(f, "({l} || {r})"),
            BoolExpr::Cmp(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var_name() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["x", "y", "z", "u_1", "Flag"]).prop_map(String::from)
    }

    fn num_strategy() -> impl Strategy<Value = NumExpr> {
        let leaf = prop_oneof![
            any::<i64>().prop_map(NumExpr::Const),
            var_name().prop_map(NumExpr::Var),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            let arith = prop::sample::select(vec![
                ArithOp::Add,
                ArithOp::Sub,
                ArithOp::Mul,
                ArithOp::Div,
                ArithOp::Pow,
                ArithOp::Rem,
            ]);
            let bit = prop::sample::select(vec![BitOp::Or, BitOp::And, BitOp::Xor]);
            prop_oneof![
                inner.clone().prop_map(|e| NumExpr::Neg(Box::new(e))),
                inner.clone().prop_map(|e| NumExpr::Not(Box::new(e))),
                (arith, inner.clone(), inner.clone()).prop_map(|(op, l, r)| NumExpr::arith(op, l, r)),
                (bit, inner.clone(), inner.clone()).prop_map(|(op, l, r)| NumExpr::bit(op, l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| NumExpr::Int(Box::new(BoolExpr::cmp(CmpOp::Lt, l, r)))),
            ]
        })
    }

    fn bool_strategy() -> impl Strategy<Value = BoolExpr> {
        let cmp = prop::sample::select(vec![CmpOp::Eq, CmpOp::Ge, CmpOp::Gt, CmpOp::Le, CmpOp::Lt]);
        let leaf = prop_oneof![
            Just(BoolExpr::True),
            Just(BoolExpr::False),
            var_name().prop_map(BoolExpr::Var),
            (cmp, num_strategy(), num_strategy()).prop_map(|(op, l, r)| BoolExpr::cmp(op, l, r)),
        ];
        leaf.prop_recursive(3, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|b| BoolExpr::Not(Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| BoolExpr::and(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| BoolExpr::or(l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn numeric_print_parse_round_trip(e in num_strategy()) {
            let text = e.to_string();
            prop_assert_eq!(parse_numeric(&text).unwrap(), e);
        }

        #[test]
        fn boolean_print_parse_round_trip(b in bool_strategy()) {
            let text = b.to_string();
            prop_assert_eq!(parse_boolean(&text).unwrap(), b);
        }
    }

    #[test]
    fn vars_are_collected_once() {
        let e = parse_boolean("x < y && (x == 3 || INT(z) > 0)").unwrap();
        let vars: Vec<_> = e.vars().into_iter().cloned().collect();
        assert_eq!(vars, ["x", "y", "z"]);
    }

    #[test]
    fn map_vars_reports_first_unknown() {
        let e = parse_numeric("a + b * c").unwrap();
        let err = e
            .try_map_vars(&mut |v: &String| if v == "b" { Err(v.clone()) } else { Ok(0usize) })
            .unwrap_err();
        assert_eq!(err, "b");
    }
}
