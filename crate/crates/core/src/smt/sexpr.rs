//! Minimal s-expression reader for solver output and script validation.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) => Some(s),
            SExpr::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(v) => Some(v),
            SExpr::Atom(_) => None,
        }
    }
}

/// Reads every top-level s-expression in `text`. `;` starts a line comment.
pub fn parse_sexprs(text: &str) -> Result<Vec<SExpr>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut stack: Vec<Vec<SExpr>> = vec![Vec::new()];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ';' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                stack.push(Vec::new());
                i += 1;
            }
            ')' => {
                let done = stack.pop().ok_or("unbalanced `)`")?;
                stack.last_mut().ok_or("unbalanced `)`")?.push(SExpr::List(done));
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '"' | '|' => {
                let close = c;
                let start = i;
                i += 1;
                while i < chars.len() && chars[i] != close {
                    i += 1;
                }
                if i == chars.len() {
                    return Err("unterminated literal".into());
                }
                i += 1;
                stack.last_mut().unwrap().push(SExpr::Atom(chars[start..i].iter().collect()));
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"();".contains(chars[i]) {
                    i += 1;
                }
                stack.last_mut().unwrap().push(SExpr::Atom(chars[start..i].iter().collect()));
            }
        }
        if stack.is_empty() {
            return Err("unbalanced `)`".into());
        }
    }
    if stack.len() != 1 {
        return Err("unbalanced `(`".into());
    }
    Ok(stack.pop().unwrap())
}

const COMMANDS: [&str; 10] = [
    "set-option",
    "set-logic",
    "declare-const",
    "declare-fun",
    "define-fun",
    "assert",
    "maximize",
    "minimize",
    "check-sat",
    "get-model",
];

/// Checks that `text` is a sequence of well-formed SMT-LIB2 commands and
/// that every symbol used in an assertion is declared or built in.
pub fn validate_script(text: &str) -> Result<(), String> {
    let cmds = parse_sexprs(text)?;
    let mut declared: std::collections::HashSet<String> = std::collections::HashSet::new();
    let builtins = [
        "and", "or", "not", "=>", "=", "ite", "+", "-", "*", "/", "<", "<=", ">", ">=", "true", "false",
    ];
    fn symbols<'a>(e: &'a SExpr, out: &mut Vec<&'a str>) {
        match e {
            SExpr::Atom(a) => out.push(a),
            SExpr::List(v) => v.iter().for_each(|x| symbols(x, out)),
        }
    }
    for (k, c) in cmds.iter().enumerate() {
        let items = c.list().ok_or_else(|| format!("command {k} is not a list"))?;
        let head = items.first().and_then(SExpr::atom).ok_or_else(|| format!("command {k} has no head"))?;
        if !COMMANDS.contains(&head) {
            return Err(format!("unknown command `{head}`"));
        }
        match head {
            "declare-const" => {
                let (name, sort) = match items {
                    [_, SExpr::Atom(n), SExpr::Atom(s)] => (n, s),
                    _ => return Err(format!("malformed declare-const at command {k}")),
                };
                if sort != "Bool" && sort != "Real" && sort != "Int" {
                    return Err(format!("unknown sort `{sort}`"));
                }
                if !declared.insert(name.clone()) {
                    return Err(format!("`{name}` declared twice"));
                }
            }
            "assert" | "maximize" | "minimize" => {
                if items.len() != 2 {
                    return Err(format!("`{head}` takes one term"));
                }
                let mut syms = Vec::new();
                symbols(&items[1], &mut syms);
                for s in syms {
                    let numeric = s.chars().next().is_some_and(|c| c.is_ascii_digit());
                    if !numeric && !builtins.contains(&s) && !declared.contains(s) {
                        return Err(format!("undeclared symbol `{s}`"));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Real(BigRational),
    /// A value form this reader does not interpret (e.g. algebraic numbers).
    Other(String),
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() || !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num = BigInt::from_str(&format!("{int}{frac}")).ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(num, den))
}

fn parse_real(e: &SExpr) -> Option<BigRational> {
    match e {
        SExpr::Atom(a) => parse_decimal(a),
        SExpr::List(v) => match v.as_slice() {
            [SExpr::Atom(op), x] if op == "-" => Some(-parse_real(x)?),
            [SExpr::Atom(op), a, b] if op == "/" => {
                let d = parse_real(b)?;
                if d.is_zero() {
                    return None;
                }
                Some(parse_real(a)? / d)
            }
            _ => None,
        },
    }
}

fn render(e: &SExpr) -> String {
    match e {
        SExpr::Atom(a) => a.clone(),
        SExpr::List(v) => format!("({})", v.iter().map(render).collect::<Vec<_>>().join(" ")),
    }
}

/// Assignment read from a `(get-model)` response.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub values: HashMap<String, Value>,
}

impl Model {
    /// Truth value of a Boolean constant; absent constants read as false.
    pub fn bool(&self, name: &str) -> Result<bool, String> {
        match self.values.get(name) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(v) => Err(format!("`{name}` is not Boolean: {v:?}")),
        }
    }

    pub fn real(&self, name: &str) -> Option<&BigRational> {
        match self.values.get(name) {
            Some(Value::Real(q)) => Some(q),
            _ => None,
        }
    }
}

/// Parses a model in either `((define-fun ...) ...)` or
/// `(model (define-fun ...) ...)` form.
pub fn parse_model(text: &str) -> Result<Model, String> {
    let exprs = parse_sexprs(text)?;
    let mut model = Model::default();
    for e in &exprs {
        let items = match e.list() {
            Some(v) => v,
            None => continue,
        };
        let defs = match items.first().and_then(SExpr::atom) {
            Some("model") => &items[1..],
            Some("error") => return Err(format!("solver error: {}", render(e))),
            _ => items,
        };
        for d in defs {
            let parts = d.list().ok_or("model entry is not a list")?;
            match parts {
                [SExpr::Atom(kw), SExpr::Atom(name), SExpr::List(args), SExpr::Atom(sort), value]
                    if kw == "define-fun" && args.is_empty() =>
                {
                    let v = match (sort.as_str(), value) {
                        ("Bool", SExpr::Atom(b)) if b == "true" => Value::Bool(true),
                        ("Bool", SExpr::Atom(b)) if b == "false" => Value::Bool(false),
                        ("Real" | "Int", v) => match parse_real(v) {
                            Some(q) => Value::Real(q),
                            None => Value::Other(render(v)),
                        },
                        (_, v) => Value::Other(render(v)),
                    };
                    model.values.insert(name.clone(), v);
                }
                [SExpr::Atom(kw), ..] if kw == "define-fun" => {}
                _ => return Err(format!("unexpected model entry {}", render(d))),
            }
        }
    }
    Ok(model)
}
