#[derive(Clone, Copy, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub min_args: usize,
    /// `None` for variadic.
    pub max_args: Option<usize>,
}

impl Builtin {
    pub fn accepts(&self, n: usize) -> bool {
        n >= self.min_args && self.max_args.is_none_or(|m| n <= m)
    }

    pub fn arity_text(&self) -> String {
        match self.max_args {
            Some(m) if m == self.min_args => format!("{m} argument(s)"),
            Some(m) => format!("{} to {m} arguments", self.min_args),
            None => format!("at least {} arguments", self.min_args),
        }
    }
}

const fn fixed(name: &'static str, n: usize) -> Builtin {
    Builtin {
        name,
        min_args: n,
        max_args: Some(n),
    }
}

pub const BUILTINS: &[Builtin] = &[
    fixed("eye", 1),
    fixed("destroy", 1),
    fixed("create", 1),
    fixed("num", 1),
    fixed("basis", 3),
    fixed("sigmax", 0),
    fixed("sigmay", 0),
    fixed("sigmaz", 0),
    fixed("sigmap", 0),
    fixed("sigmam", 0),
    Builtin {
        name: "kron",
        min_args: 2,
        max_args: None,
    },
    fixed("displace", 2),
];

pub fn lookup(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

/// Reserved names that symbols may not shadow.
pub fn is_reserved(name: &str) -> bool {
    name == "id" || lookup(name).is_some()
}
