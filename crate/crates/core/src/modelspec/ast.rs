use std::fmt;

use num_complex::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

/// Expression tree. Parentheses are not represented; the printer inserts
/// the minimal set needed to re-parse to the same tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Complex<f64>),
    Sym(String),
    Call {
        name: String,
        args: Vec<Expr>,
    },
    Neg(Box<Expr>),
    Dagger(Box<Expr>),
    Bin {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Bin {
                op: BinOp::Add | BinOp::Sub,
                ..
            } => 1,
            Expr::Bin { op: BinOp::Mul, .. } => 2,
            Expr::Neg(_) => 3,
            Expr::Dagger(_) => 4,
            Expr::Num(z) if z.re != 0.0 && z.im != 0.0 => 0,
            Expr::Num(z) if z.re.is_sign_negative() || z.im.is_sign_negative() => 0,
            _ => 5,
        }
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    /// Symbols referenced anywhere in the tree.
    pub fn symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => out.push(s.clone()),
            Expr::Call { args, .. } => args.iter().for_each(|a| a.symbols(out)),
            Expr::Neg(e) | Expr::Dagger(e) => e.symbols(out),
            Expr::Bin { lhs, rhs, .. } => {
                lhs.symbols(out);
                rhs.symbols(out);
            }
        }
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, z: Complex<f64>) -> fmt::Result {
    if z.im == 0.0 {
        write!(f, "{:?}", z.re)
    } else if z.re == 0.0 {
        write!(f, "{:?}i", z.im)
    } else {
        write!(f, "({:?} + {:?}i)", z.re, z.im)
    }
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(z) => write_num(f, *z),
            Expr::Sym(s) => f.write_str(s),
            Expr::Call { name, args } => {
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Neg(e) => {
                f.write_str("-")?;
                child(f, e, e.prec() < 3)
            }
            Expr::Dagger(e) => {
                child(f, e, e.prec() < 4)?;
                f.write_str("'")
            }
            Expr::Bin { op, lhs, rhs } => {
                let p = self.prec();
                child(f, lhs, lhs.prec() < p)?;
                f.write_str(match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                })?;
                child(f, rhs, rhs.prec() <= p)
            }
        }
    }
}
