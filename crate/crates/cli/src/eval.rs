//! Static grade checking and evaluation of expressions over `ℚ(√N)`.

use partlin::transforms::{self, Sign};
use partlin::{FLinComb, FieldElem, Partition};

use crate::error::ExprError;
use crate::expr::{Const, Expr, ExprKind, Func};

/// Static type of an expression. `drop` counts the leg-cutting transforms
/// applied, so a combination lives at dimension `N − drop`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ty {
    Scalar,
    Comb {
        upper: usize,
        lower: usize,
        drop: u64,
    },
}

impl std::fmt::Display for Ty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ty::Scalar => write!(f, "a scalar"),
            Ty::Comb {
                upper,
                lower,
                drop: 0,
            } => write!(f, "grade ({upper},{lower})"),
            Ty::Comb { upper, lower, drop } => write!(f, "grade ({upper},{lower}) at N-{drop}"),
        }
    }
}

fn comb(upper: usize, lower: usize, drop: u64) -> Ty {
    Ty::Comb { upper, lower, drop }
}

fn err(e: &Expr, msg: impl Into<String>) -> ExprError {
    ExprError::new(e.span.start, msg)
}

fn need_comb(e: &Expr, ty: Ty, what: &str) -> Result<(usize, usize, u64), ExprError> {
    match ty {
        Ty::Comb { upper, lower, drop } => Ok((upper, lower, drop)),
        Ty::Scalar => Err(err(
            e,
            format!("{what} expects a combination, found a scalar"),
        )),
    }
}

/// Checks grades, arities and dimensions before anything is computed.
pub fn check(e: &Expr, dim: u64) -> Result<Ty, ExprError> {
    match &e.kind {
        ExprKind::Num { .. } => Ok(Ty::Scalar),
        ExprKind::Partition(p) => Ok(comb(p.upper(), p.lower(), 0)),
        ExprKind::Const(c) => Ok(match c {
            Const::Pi | Const::Tau | Const::Id => comb(1, 1, 0),
            Const::Pair => comb(0, 2, 0),
            Const::Up => comb(0, 1, 0),
        }),
        ExprKind::Block(k) => Ok(comb(0, *k, 0)),
        ExprKind::CutSum(k, i) => {
            if i > k {
                return Err(err(
                    e,
                    format!("cannot cut {i} legs of a block with {k} points"),
                ));
            }
            Ok(comb(0, *k, 0))
        }
        ExprKind::Zero(k, l) => Ok(comb(*k, *l, 0)),
        ExprKind::Neg(a) => check(a, dim),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let (ta, tb) = (check(a, dim)?, check(b, dim)?);
            if ta != tb {
                return Err(err(b, format!("cannot add {tb} to {ta}")));
            }
            Ok(ta)
        }
        ExprKind::Mul(a, b) => match (check(a, dim)?, check(b, dim)?) {
            (Ty::Scalar, t) | (t, Ty::Scalar) => Ok(t),
            _ => Err(err(
                b,
                "`*` multiplies by scalars; use compose or tensor for diagrams",
            )),
        },
        ExprKind::Call(func, args) => {
            let tys = args
                .iter()
                .map(|a| check(a, dim))
                .collect::<Result<Vec<_>, _>>()?;
            let name = func.name();
            let (k, l, d) = need_comb(&args[0], tys[0], name)?;
            match func {
                Func::Tensor | Func::Compose => {
                    let (k2, l2, d2) = need_comb(&args[1], tys[1], name)?;
                    if d != d2 {
                        return Err(err(&args[1], "operands live at different dimensions"));
                    }
                    if *func == Func::Tensor {
                        Ok(comb(k + k2, l + l2, d))
                    } else if k != l2 {
                        Err(err(
                            &args[1],
                            format!("cannot compose: {} has {l2} lower points but the outer operand has {k} upper points", args[1]),
                        ))
                    } else {
                        Ok(comb(k2, l, d))
                    }
                }
                Func::Star => Ok(comb(l, k, d)),
                Func::Rotl if k == 0 => Err(err(e, "rotl needs an upper point")),
                Func::Rotl => Ok(comb(k - 1, l + 1, d)),
                Func::Rotr if l == 0 => Err(err(e, "rotr needs a lower point")),
                Func::Rotr => Ok(comb(k + 1, l - 1, d)),
                Func::Cyc if k != 0 || l == 0 => Err(err(e, "cyc needs grade (0,l) with l > 0")),
                Func::Cyc => Ok(comb(0, l, d)),
                Func::Vplus | Func::Vminus => {
                    if dim < d + 2 {
                        return Err(err(e, format!("{name} needs dimension at least 2")));
                    }
                    Ok(comb(k, l, d + 1))
                }
                Func::Psb | Func::Tsb => Ok(comb(k, l, d)),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(FieldElem),
    Comb(FLinComb),
}

fn lift(e: &Expr) -> impl Fn(partlin::Error) -> ExprError + '_ {
    move |x| err(e, x.to_string())
}

fn value(e: &Expr, dim: u64) -> Result<Value, ExprError> {
    let n = dim;
    let single = |p: Partition| Ok(Value::Comb(FLinComb::from_partition(p, n)));
    match &e.kind {
        ExprKind::Num { value, radical } => {
            let q = FieldElem::rational(value.clone());
            Ok(Value::Scalar(if *radical {
                q * FieldElem::sqrt(n)
            } else {
                q
            }))
        }
        ExprKind::Partition(p) => single(p.clone()),
        ExprKind::Const(Const::Pi) => Ok(Value::Comb(transforms::pi(n).map_err(lift(e))?)),
        ExprKind::Const(Const::Tau) => Ok(Value::Comb(transforms::tau(n).map_err(lift(e))?)),
        ExprKind::Const(Const::Id) => single(Partition::identity(1)),
        ExprKind::Const(Const::Pair) => single(Partition::pair()),
        ExprKind::Const(Const::Up) => single(Partition::up()),
        ExprKind::Block(k) => single(Partition::block(*k)),
        ExprKind::CutSum(k, i) => Ok(Value::Comb(
            transforms::block_cut_sum(*k, *i, n).map_err(lift(e))?,
        )),
        ExprKind::Zero(k, l) => Ok(Value::Comb(FLinComb::zero(*k, *l, n))),
        ExprKind::Neg(a) => Ok(match value(a, dim)? {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Comb(x) => Value::Comb(x.neg()),
        }),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let add = matches!(e.kind, ExprKind::Add(..));
            match (value(a, dim)?, value(b, dim)?) {
                (Value::Scalar(x), Value::Scalar(y)) => {
                    let r = if add { x.try_add(&y) } else { x.try_sub(&y) };
                    Ok(Value::Scalar(r.map_err(|x| err(b, x.to_string()))?))
                }
                (Value::Comb(x), Value::Comb(y)) => {
                    let r = if add { x.add(&y) } else { x.sub(&y) };
                    Ok(Value::Comb(r.map_err(lift(b))?))
                }
                _ => Err(err(b, "cannot add a scalar and a combination")),
            }
        }
        ExprKind::Mul(a, b) => match (value(a, dim)?, value(b, dim)?) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(
                x.try_mul(&y).map_err(|x| err(b, x.to_string()))?,
            )),
            (Value::Scalar(c), Value::Comb(x)) | (Value::Comb(x), Value::Scalar(c)) => {
                Ok(Value::Comb(x.scale(&c)))
            }
            _ => Err(err(
                b,
                "`*` multiplies by scalars; use compose or tensor for diagrams",
            )),
        },
        ExprKind::Call(func, args) => {
            let mut xs = Vec::with_capacity(args.len());
            for a in args {
                match value(a, dim)? {
                    Value::Comb(x) => xs.push(x),
                    Value::Scalar(_) => {
                        return Err(err(a, format!("{} expects a combination", func.name())))
                    }
                }
            }
            let x = &xs[0];
            let out = match func {
                Func::Tensor => x.tensor(&xs[1]),
                Func::Compose => x.compose(&xs[1]),
                Func::Star => Ok(x.involute()),
                Func::Rotl => x.rotate_left(),
                Func::Rotr => x.rotate_right(),
                Func::Cyc => x.rotate_cycle(),
                Func::Vplus => transforms::v_transform(x, Sign::Plus, n),
                Func::Vminus => transforms::v_transform(x, Sign::Minus, n),
                Func::Psb => transforms::p_transform(x),
                Func::Tsb => transforms::t_transform(x),
            };
            Ok(Value::Comb(out.map_err(lift(e))?))
        }
    }
}

/// Checks and evaluates `e` at dimension `dim`, whose square root is the
/// meaning of `r`. A scalar result is returned as a multiple of the empty
/// partition.
pub fn eval(e: &Expr, dim: u64) -> Result<FLinComb, ExprError> {
    if dim == 0 {
        return Err(ExprError::new(0, "dimension must be at least 1"));
    }
    check(e, dim)?;
    Ok(match value(e, dim)? {
        Value::Comb(x) => x,
        Value::Scalar(s) => FLinComb::term(s, Partition::empty(), dim),
    })
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, dim: u64) -> Result<FLinComb, ExprError> {
    eval(&crate::expr::parse(src)?, dim)
}
