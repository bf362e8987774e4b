use std::collections::BTreeMap;

use num_complex::Complex;

use super::ast::{BinOp, Expr};
use super::builtins;
use super::parser::parse_expression;
use crate::error::{Error, Result};
use crate::operators::{expm, fock, qubit, Operator};

type Z = Complex<f64>;

#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Z),
    Op(Operator<f64>),
}

impl Value {
    /// Scalars become `c * I` on a space of dimension `dim`.
    pub fn into_operator(self, dim: usize) -> Result<Operator<f64>> {
        match self {
            Value::Scalar(z) => Ok(Operator::identity(dim).scale(z)),
            Value::Op(op) if op.dim() == dim => Ok(op),
            Value::Op(op) => Err(Error::dims("expression result", dim, op.dim())),
        }
    }
}

/// Evaluation context: named symbol sources and the total Hilbert-space
/// dimension (which sets the size of `id`).
pub struct Env<'a> {
    pub symbols: &'a BTreeMap<String, String>,
    pub dim: usize,
}

pub fn evaluate(ast: &Expr, env: &Env<'_>) -> Result<Value> {
    let mut ev = Evaluator {
        env,
        cache: BTreeMap::new(),
        stack: Vec::new(),
    };
    ev.eval(ast)
}

struct Evaluator<'a, 'b> {
    env: &'a Env<'b>,
    cache: BTreeMap<String, Value>,
    stack: Vec<String>,
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    match v {
        Value::Scalar(z) if z.im == 0.0 && z.re >= 0.0 && z.re.fract() == 0.0 && z.re < 1e6 => {
            Ok(z.re as usize)
        }
        _ => Err(Error::Eval(format!(
            "{what} must be a nonnegative integer literal"
        ))),
    }
}

fn as_scalar(v: &Value, what: &str) -> Result<Z> {
    match v {
        Value::Scalar(z) => Ok(*z),
        Value::Op(_) => Err(Error::Eval(format!("{what} must be a scalar"))),
    }
}

impl Evaluator<'_, '_> {
    fn symbol(&mut self, name: &str) -> Result<Value> {
        if let Some(v) = self.cache.get(name) {
            return Ok(v.clone());
        }
        if name == "id" {
            return Ok(Value::Op(Operator::identity(self.env.dim)));
        }
        let Some(src) = self.env.symbols.get(name) else {
            if builtins::lookup(name).is_some_and(|b| b.accepts(0)) {
                return self.call(name, &[]);
            }
            return Err(Error::Eval(format!("undefined symbol '{name}'")));
        };
        if self.stack.iter().any(|s| s == name) {
            let mut cycle = self.stack.clone();
            cycle.push(name.to_string());
            return Err(Error::Eval(format!(
                "cyclic symbol definition: {}",
                cycle.join(" -> ")
            )));
        }
        let ast =
            parse_expression(src).map_err(|e| Error::Eval(format!("in symbol '{name}': {e}")))?;
        self.stack.push(name.to_string());
        let v = self.eval(&ast);
        self.stack.pop();
        let v = v?;
        self.cache.insert(name.to_string(), v.clone());
        Ok(v)
    }

    fn call(&mut self, name: &str, args: &[Expr]) -> Result<Value> {
        let vals = args
            .iter()
            .map(|a| self.eval(a))
            .collect::<Result<Vec<_>>>()?;
        let op = match name {
            "eye" => Operator::identity(positive(as_index(&vals[0], "eye(n)")?, "eye")?),
            "destroy" => fock::destroy(positive(as_index(&vals[0], "destroy(n)")?, "destroy")?),
            "create" => fock::create(positive(as_index(&vals[0], "create(n)")?, "create")?),
            "num" => fock::num(positive(as_index(&vals[0], "num(n)")?, "num")?),
            "basis" => {
                let n = positive(as_index(&vals[0], "basis(n, i, j)")?, "basis")?;
                let i = as_index(&vals[1], "basis row index")?;
                let j = as_index(&vals[2], "basis column index")?;
                if i >= n || j >= n {
                    return Err(Error::Eval(format!(
                        "basis({n}, {i}, {j}) index out of range"
                    )));
                }
                Operator::unit(n, i, j)
            }
            "sigmax" => qubit::sigmax(),
            "sigmay" => qubit::sigmay(),
            "sigmaz" => qubit::sigmaz(),
            "sigmap" => qubit::sigmap(),
            "sigmam" => qubit::sigmam(),
            "kron" => {
                let mut it = vals.into_iter();
                let mut acc = op_arg(it.next().unwrap(), "kron")?;
                for v in it {
                    acc = acc.kron(&op_arg(v, "kron")?);
                }
                acc
            }
            "displace" => {
                let n = positive(as_index(&vals[0], "displace(n, alpha)")?, "displace")?;
                let alpha = as_scalar(&vals[1], "displacement amplitude")?;
                let gen = &fock::create::<f64>(n).scale(alpha)
                    - &fock::destroy::<f64>(n).scale(alpha.conj());
                Operator::from_mat(expm::expm(gen.mat())?)?
            }
            _ => return Err(Error::Eval(format!("unknown builtin '{name}'"))),
        };
        Ok(Value::Op(op))
    }

    fn eval(&mut self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Num(z) => Ok(Value::Scalar(*z)),
            Expr::Sym(s) => self.symbol(s),
            Expr::Call { name, args } => self.call(name, args),
            Expr::Neg(x) => Ok(match self.eval(x)? {
                Value::Scalar(z) => Value::Scalar(-z),
                Value::Op(o) => Value::Op(-&o),
            }),
            Expr::Dagger(x) => Ok(match self.eval(x)? {
                Value::Scalar(z) => Value::Scalar(z.conj()),
                Value::Op(o) => Value::Op(o.dagger()),
            }),
            Expr::Bin { op, lhs, rhs } => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                binary(*op, a, b)
            }
        }
    }
}

fn positive(n: usize, what: &str) -> Result<usize> {
    if n == 0 {
        Err(Error::Eval(format!("{what} dimension must be positive")))
    } else {
        Ok(n)
    }
}

fn op_arg(v: Value, what: &str) -> Result<Operator<f64>> {
    match v {
        Value::Op(o) => Ok(o),
        Value::Scalar(_) => Err(Error::Eval(format!("{what} arguments must be operators"))),
    }
}

fn binary(op: BinOp, a: Value, b: Value) -> Result<Value> {
    use Value::{Op, Scalar};
    let ctx = match op {
        BinOp::Add => "'+'",
        BinOp::Sub => "'-'",
        BinOp::Mul => "'*'",
    };
    Ok(match (op, a, b) {
        (BinOp::Add, Scalar(x), Scalar(y)) => Scalar(x + y),
        (BinOp::Sub, Scalar(x), Scalar(y)) => Scalar(x - y),
        (BinOp::Mul, Scalar(x), Scalar(y)) => Scalar(x * y),
        (BinOp::Mul, Scalar(x), Op(o)) | (BinOp::Mul, Op(o), Scalar(x)) => Op(o.scale(x)),
        (BinOp::Add, Scalar(x), Op(o)) | (BinOp::Add, Op(o), Scalar(x)) => {
            Op(&o + &Operator::identity(o.dim()).scale(x))
        }
        (BinOp::Sub, Scalar(x), Op(o)) => Op(&Operator::identity(o.dim()).scale(x) - &o),
        (BinOp::Sub, Op(o), Scalar(x)) => Op(&o - &Operator::identity(o.dim()).scale(x)),
        (_, Op(x), Op(y)) => {
            if x.dim() != y.dim() {
                return Err(Error::dims(format!("operands of {ctx}"), x.dim(), y.dim()));
            }
            Op(match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
            })
        }
    })
}
