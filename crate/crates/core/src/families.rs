//! Named example graphs and rule systems, addressable as `gen:` inputs.
//!
//! | input | graph |
//! |---|---|
//! | `gen:spine` | `%n:cons(b,%n)` |
//! | `gen:spine-cycle:k` | `k` b-cells, then `cons(a, <root>)` |
//! | `gen:spine-tree:k` | `k` b-cells, then `cons(a,c)` |
//! | `gen:sharing:0` / `gen:sharing:1` | `f(c,c)` / `f(%n:c,%n)` |
//! | `gen:fringe:g:n` / `gen:fringe:h:n` | the two fringe families |
//! | `gen:y:start` / `gen:y:fixed` | `@(Y,f)` / `%n:@(f,%n)` |
//! | `gen:shared-cycle` | `%n0:f(%n1:h(%n0,%n2:c),f(%n1,%n2))` |
//! | `gen:trunc-example` | `f(%g:h(a),h(h(%g)))` |
//!
//! `gen:b-spine`, `gen:convWeird:i` and `gen:truncFringe:{g,h}:n` are
//! aliases.

use crate::error::{Error, Result};
use crate::graph::{Signature, TermGraph};
use crate::notation::parse_grs;
use crate::rewrite::Grs;

pub const RHO1: &str = "rho1: cons(a,$x) -> cons(b,cons(a,$x))";
pub const RHO2: &str = "rho2: %n:cons(a,$x) -> cons(b,%n)";
pub const RHO3: &str = "rho3: cons(b,$x) -> cons(a,cons(b,$x))";
pub const Y1: &str = "y1: @(Y,$x) -> @($x,@(Y,$x))";
pub const Y2: &str = "y2: %n:@(Y,$x) -> @($x,%n)";
pub const SHARE: &str = "share: f(c,c) -> f(%n:c,%n)";
pub const UNSHARE: &str = "unshare: f(c,c) -> f(c,c)";

fn parse(s: &str) -> TermGraph {
    s.parse().expect("built-in graph parses")
}

pub fn spine() -> TermGraph {
    parse("%n:cons(b,%n)")
}

fn b_cells(k: usize, tail: &str) -> String {
    let mut s = String::new();
    for _ in 0..k {
        s.push_str("cons(b,");
    }
    s.push_str(tail);
    s.push_str(&")".repeat(k));
    s
}

/// `k` steps of `rho1` from `%n:cons(a,%n)`: the back edge moves down.
pub fn spine_cycle(k: usize) -> TermGraph {
    if k == 0 {
        return parse("%r:cons(a,%r)");
    }
    parse(&format!("%r:{}", b_cells(k, "cons(a,%r)")))
}

/// `k` steps of `rho1` from `cons(a,c)`.
pub fn spine_tree(k: usize) -> TermGraph {
    parse(&b_cells(k, "cons(a,c)"))
}

/// `f(c,c)` for even `i`, `f(%n:c,%n)` for odd `i`.
pub fn sharing(i: usize) -> TermGraph {
    if i.is_multiple_of(2) {
        parse("f(c,c)")
    } else {
        parse("f(%n:c,%n)")
    }
}

fn g_chain(n: usize, inner: &str) -> String {
    format!("{}{}{}", "g(".repeat(n), inner, ")".repeat(n))
}

/// `f(g^n(h(a,a,%x:a)),%x)`.
pub fn fringe_g(n: usize) -> TermGraph {
    parse(&format!("f({},%x)", g_chain(n, "h(a,a,%x:a)")))
}

/// Like [`fringe_g`] with the two leftmost `h`-successors shared.
pub fn fringe_h(n: usize) -> TermGraph {
    parse(&format!("f({},%x)", g_chain(n, "h(%y:a,%y,%x:a)")))
}

pub fn y_start() -> TermGraph {
    parse("@(Y,f)")
}

pub fn y_fixed() -> TermGraph {
    parse("%n:@(f,%n)")
}

pub fn shared_cycle() -> TermGraph {
    parse("%n0:f(%n1:h(%n0,%n2:c),f(%n1,%n2))")
}

pub fn trunc_example() -> TermGraph {
    parse("f(%g:h(a),h(h(%g)))")
}

fn number(s: Option<&str>, input: &str) -> Result<usize> {
    s.and_then(|x| x.parse().ok())
        .ok_or_else(|| Error::Parse { offset: 0, message: format!("`{input}` needs a numeric argument") })
}

/// Resolves a `gen:` input to a graph.
pub fn generate(input: &str) -> Result<TermGraph> {
    let body = input.strip_prefix("gen:").unwrap_or(input);
    let parts: Vec<&str> = body.split(':').collect();
    let unknown = || Error::Parse { offset: 0, message: format!("unknown generator `{input}`") };
    Ok(match parts.as_slice() {
        ["spine"] | ["b-spine"] => spine(),
        ["truncFringe", "g", n] => fringe_g(number(Some(n), input)?),
        ["truncFringe", "h", n] => fringe_h(number(Some(n), input)?),
        ["convWeird", i] => sharing(number(Some(i), input)?),
        ["spine-cycle", k] => spine_cycle(number(Some(k), input)?),
        ["spine-tree", k] => spine_tree(number(Some(k), input)?),
        ["sharing", i] => sharing(number(Some(i), input)?),
        ["fringe", "g", n] => fringe_g(number(Some(n), input)?),
        ["fringe", "h", n] => fringe_h(number(Some(n), input)?),
        ["y", "start"] => y_start(),
        ["y", "fixed"] => y_fixed(),
        ["shared-cycle"] => shared_cycle(),
        ["trunc-example"] => trunc_example(),
        _ => return Err(unknown()),
    })
}

/// Resolves a `gen:` rule system: `spine`, `spine-shared`, `spine-alt`,
/// `y-unfold`, `y-fixed` or `sharing`.
pub fn generate_rules(input: &str) -> Result<Grs> {
    let body = input.strip_prefix("gen:").unwrap_or(input);
    let text = match body {
        "spine" => RHO1.to_string(),
        "spine-shared" => RHO2.to_string(),
        "spine-alt" => format!("{RHO1}\n{RHO3}"),
        "y-unfold" => Y1.to_string(),
        "y-fixed" => Y2.to_string(),
        "sharing" => format!("{SHARE}\n{UNSHARE}"),
        _ => return Err(Error::Parse { offset: 0, message: format!("unknown rule system `{input}`") }),
    };
    parse_grs(&text, &mut Signature::new())
}

pub const GENERATORS: &[&str] = &[
    "gen:spine",
    "gen:b-spine",
    "gen:spine-cycle:K",
    "gen:spine-tree:K",
    "gen:sharing:I",
    "gen:convWeird:I",
    "gen:fringe:g:N",
    "gen:fringe:h:N",
    "gen:truncFringe:g:N",
    "gen:truncFringe:h:N",
    "gen:y:start",
    "gen:y:fixed",
    "gen:shared-cycle",
    "gen:trunc-example",
];

pub const RULE_GENERATORS: &[&str] =
    &["gen:spine", "gen:spine-shared", "gen:spine-alt", "gen:y-unfold", "gen:y-fixed", "gen:sharing"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(spine_cycle(0).to_string(), "%n0:cons(a,%n0)");
        assert_eq!(spine_cycle(1).to_string(), "%n0:cons(b,cons(a,%n0))");
        assert_eq!(spine_tree(1).to_string(), "cons(b,cons(a,c))");
        assert_eq!(fringe_g(1).to_string(), "f(g(h(a,a,%n5:a)),%n5)");
        assert_eq!(fringe_h(0).to_string(), "f(h(%n2:a,%n2,%n3:a),%n3)");
        assert_eq!(generate("gen:fringe:h:2").unwrap(), fringe_h(2));
        assert!(generate("gen:nope").is_err());
        assert_eq!(generate_rules("gen:spine-alt").unwrap().rules().len(), 2);
    }
}
