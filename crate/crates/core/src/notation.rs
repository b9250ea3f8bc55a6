//! Linear notation for term graphs and rules.
//!
//! ```text
//! Term    := Binding | App | Atom | Ref
//! Binding := NAME ":" (App | Atom)
//! App     := SYMBOL "(" Term ("," Term)* ")"
//! Atom    := SYMBOL | "bot" | VAR
//! Ref     := NAME
//! Rule    := Term "->" Term
//! ```
//!
//! `NAME` is `%ident`, `VAR` is `$ident`. Symbols start with a letter or
//! `@`. Names are scoped over the whole input, so in a rule the right-hand
//! side may refer to nodes bound on the left.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Node, NodeId, Signature, Symbol, TermGraph};
use crate::rewrite::{Grs, NamedRule, Rule};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Var(String),
    Sym(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    End,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let ident_from = |mut j: usize| {
        while j < chars.len() && is_ident(chars[j].1) {
            j += 1;
        }
        j
    };
    let slice = |a: usize, b: usize| -> String { chars[a..b].iter().map(|(_, c)| c).collect() };
    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::LParen, off));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, off));
                i += 1
            }
            ',' => {
                out.push((Tok::Comma, off));
                i += 1
            }
            ':' => {
                out.push((Tok::Colon, off));
                i += 1
            }
            '-' if chars.get(i + 1).map(|x| x.1) == Some('>') => {
                out.push((Tok::Arrow, off));
                i += 2
            }
            '%' | '$' => {
                let j = ident_from(i + 1);
                if j == i + 1 {
                    return Err(Error::Parse { offset: off, message: format!("expected identifier after `{c}`") });
                }
                let id = slice(i + 1, j);
                out.push((if c == '%' { Tok::Name(id) } else { Tok::Var(id) }, off));
                i = j
            }
            c if c.is_ascii_alphabetic() || c == '@' => {
                let j = ident_from(i + 1);
                out.push((Tok::Sym(slice(i, j)), off));
                i = j
            }
            c => return Err(Error::Parse { offset: off, message: format!("unexpected character `{c}`") }),
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

enum Parsed {
    Node(NodeId),
    Ref(String),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a mut Signature,
    nodes: Vec<Node>,
    names: HashMap<String, NodeId>,
    // (node, successor index, name) for edges into references
    pending: Vec<(NodeId, usize, String)>,
    vars: Option<HashMap<String, NodeId>>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a mut Signature, share_vars: bool) -> Result<Parser<'a>> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig,
            nodes: Vec::new(),
            names: HashMap::new(),
            pending: Vec::new(),
            vars: share_vars.then(HashMap::new),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn term(&mut self) -> Result<Parsed> {
        match self.peek().clone() {
            Tok::Name(name) => {
                self.next();
                if *self.peek() != Tok::Colon {
                    return Ok(Parsed::Ref(name));
                }
                self.next();
                if matches!(self.peek(), Tok::Name(_)) {
                    return self.error("a name must be bound to an application or atom");
                }
                let n = self.node()?;
                if self.names.insert(name.clone(), n).is_some() {
                    return Err(Error::DuplicateName(name));
                }
                Ok(Parsed::Node(n))
            }
            _ => self.node().map(Parsed::Node),
        }
    }

    fn node(&mut self) -> Result<NodeId> {
        let off = self.offset();
        match self.next() {
            Tok::Var(v) => {
                if let Some(vars) = &self.vars {
                    if let Some(&n) = vars.get(&v) {
                        return Ok(n);
                    }
                }
                let n = self.push(Node::leaf(Symbol::var(&v)));
                if let Some(vars) = &mut self.vars {
                    vars.insert(v, n);
                }
                Ok(n)
            }
            Tok::Sym(s) if s == "bot" => {
                if *self.peek() == Tok::LParen {
                    return self.error("`bot` takes no arguments");
                }
                Ok(self.push(Node::leaf(Symbol::Bot)))
            }
            Tok::Sym(s) => {
                let n = self.push(Node::leaf(Symbol::fun(&s)));
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.next();
                    loop {
                        args.push(self.term()?);
                        match self.peek() {
                            Tok::Comma => self.next(),
                            Tok::RParen => {
                                self.next();
                                break;
                            }
                            _ => return self.error("expected `,` or `)`"),
                        };
                    }
                }
                if let Err(expected) = self.sig.admit(&s, args.len()) {
                    return match expected {
                        Some(expected) => {
                            Err(Error::ArityConflict { symbol: s, expected, found: args.len(), offset: off })
                        }
                        None => Err(Error::UnknownSymbol(s)),
                    };
                }
                for (i, a) in args.into_iter().enumerate() {
                    let target = match a {
                        Parsed::Node(m) => m,
                        Parsed::Ref(name) => {
                            self.pending.push((n, i, name));
                            NodeId(u32::MAX)
                        }
                    };
                    self.nodes[n.index()].succ.push(target);
                }
                Ok(n)
            }
            Tok::End => Err(Error::Parse { offset: off, message: "unexpected end of input".into() }),
            _ => Err(Error::Parse { offset: off, message: "expected a term".into() }),
        }
    }

    fn push(&mut self, n: Node) -> NodeId {
        self.nodes.push(n);
        NodeId::from(self.nodes.len() - 1)
    }

    fn resolve(&mut self, p: Parsed) -> Result<NodeId> {
        match p {
            Parsed::Node(n) => Ok(n),
            Parsed::Ref(name) => self.names.get(&name).copied().ok_or(Error::UnboundName(name)),
        }
    }

    fn finish(&mut self) -> Result<Vec<Node>> {
        for (n, i, name) in std::mem::take(&mut self.pending) {
            let target = *self.names.get(&name).ok_or(Error::UnboundName(name))?;
            self.nodes[n.index()].succ[i] = target;
        }
        Ok(std::mem::take(&mut self.nodes))
    }
}

/// Parses a term graph, extending `sig` with symbols seen for the first
/// time if it is open. The result is canonical.
pub fn parse_graph(text: &str, sig: &mut Signature) -> Result<TermGraph> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut p = Parser::new(text, sig, false)?;
    let root = p.term()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    let root = p.resolve(root)?;
    let nodes = p.finish()?;
    Ok(TermGraph::new(nodes, root)?.canonicalize())
}

/// Parses a rule `lhs -> rhs`. Variables with the same name denote one
/// node; a right-hand side consisting of a variable or a reference makes
/// that left-hand node the right root.
pub fn parse_rule(text: &str, sig: &mut Signature) -> Result<Rule> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut p = Parser::new(text, sig, true)?;
    let lhs = p.term()?;
    p.expect(Tok::Arrow, "`->`")?;
    let rhs = p.term()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    let l = p.resolve(lhs)?;
    let r = p.resolve(rhs)?;
    let nodes = p.finish()?;
    Rule::new(nodes, l, r)
}

/// Parses a rule file: one `name: lhs -> rhs` per line, `#` starts a
/// comment. Unnamed rules are called `r0`, `r1`, ... by line order.
pub fn parse_grs(text: &str, sig: &mut Signature) -> Result<Grs> {
    let mut rules = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, body) = split_rule_name(line);
        let name = name.map(str::to_string).unwrap_or_else(|| format!("r{}", rules.len()));
        rules.push(NamedRule { name, rule: parse_rule(body, sig)? });
    }
    Ok(Grs::new(sig.clone(), rules))
}

fn split_rule_name(line: &str) -> (Option<&str>, &str) {
    if let Some((head, tail)) = line.split_once(':') {
        let head = head.trim();
        if !head.is_empty() && head.chars().all(is_ident) {
            return (Some(head), tail);
        }
    }
    (None, line)
}

enum Emit {
    Text(String),
    Visit(NodeId),
}

fn print_from(nodes: &[Node], roots: &[NodeId], sep: &str, plain_vars: bool) -> String {
    let mut seen_count = vec![0usize; nodes.len()];
    for n in nodes {
        for s in &n.succ {
            seen_count[s.index()] += 1;
        }
    }
    for r in roots {
        seen_count[r.index()] += 1;
    }
    let mut index = vec![None; nodes.len()];
    let mut next = 0usize;
    let mut out = String::new();
    for (k, &r) in roots.iter().enumerate() {
        if k > 0 {
            out.push_str(sep);
        }
        let mut stack = vec![Emit::Visit(r)];
        while let Some(e) = stack.pop() {
            let n = match e {
                Emit::Text(t) => {
                    out.push_str(&t);
                    continue;
                }
                Emit::Visit(n) => n,
            };
            let node = &nodes[n.index()];
            if plain_vars && node.label.is_var() {
                out.push_str(&node.label.to_string());
                continue;
            }
            if let Some(i) = index[n.index()] {
                out.push_str(&format!("%n{i}"));
                continue;
            }
            index[n.index()] = Some(next);
            if seen_count[n.index()] > 1 {
                out.push_str(&format!("%n{next}:"));
            }
            next += 1;
            out.push_str(&node.label.to_string());
            if !node.succ.is_empty() {
                out.push('(');
                stack.push(Emit::Text(")".into()));
                for (i, &s) in node.succ.iter().enumerate().rev() {
                    stack.push(Emit::Visit(s));
                    if i > 0 {
                        stack.push(Emit::Text(",".into()));
                    }
                }
            }
        }
    }
    out
}

/// Prints a graph in leftmost depth-first order. A node gets a `%nK:`
/// binding, `K` being its first-visit index, iff it is reached more than
/// once.
pub fn print_graph(g: &TermGraph) -> String {
    print_from(g.nodes(), &[g.root()], "", false)
}

pub fn print_rule(rule: &Rule) -> String {
    print_from(rule.nodes(), &[rule.lhs_root(), rule.rhs_root()], " -> ", true)
}

impl fmt::Display for TermGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_graph(self))
    }
}

impl FromStr for TermGraph {
    type Err = Error;

    /// Parses with a fresh open signature.
    fn from_str(s: &str) -> Result<TermGraph> {
        parse_graph(s, &mut Signature::new())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_rule(self))
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        parse_rule(s, &mut Signature::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> TermGraph {
        s.parse().unwrap()
    }

    #[test]
    fn round_trips() {
        for s in [
            "%n0:cons(b,%n0)",
            "cons(a,c)",
            "%n0:f(%n1:h(%n0,%n2:c),f(%n1,%n2))",
            "f(%n1:c,%n1)",
            "f(bot,$x)",
            "%n0:@(f,%n0)",
        ] {
            assert_eq!(print_graph(&g(s)), s);
        }
    }

    #[test]
    fn names_are_first_visit_indices() {
        assert_eq!(g("%x:cons(b,%x)").to_string(), "%n0:cons(b,%n0)");
        assert_eq!(g("f(c, %k:g(%k))").to_string(), "f(c,%n2:g(%n2))");
    }

    #[test]
    fn parse_errors() {
        let mut sig = Signature::new();
        assert!(matches!(parse_graph("f(a,", &mut sig), Err(Error::Parse { .. })));
        assert_eq!(parse_graph("f(%x)", &mut Signature::new()), Err(Error::UnboundName("x".into())));
        assert_eq!(parse_graph("f(%x:a,%x:b)", &mut Signature::new()), Err(Error::DuplicateName("x".into())));
        assert!(matches!(parse_graph("f(a,f(a))", &mut Signature::new()), Err(Error::ArityConflict { .. })));
        assert_eq!(parse_graph("  ", &mut Signature::new()), Err(Error::EmptyInput));
        assert!(matches!(parse_graph("bot(a)", &mut Signature::new()), Err(Error::Parse { .. })));
        let mut closed = Signature::closed([("f", 1)]);
        assert_eq!(parse_graph("g", &mut closed), Err(Error::UnknownSymbol("g".into())));
    }

    #[test]
    fn signature_is_inferred_then_enforced() {
        let mut sig = Signature::new();
        parse_graph("cons(a,c)", &mut sig).unwrap();
        assert_eq!(sig.arity("cons"), Some(2));
        assert!(parse_graph("cons(a)", &mut sig).is_err());
    }

    #[test]
    fn rules() {
        let mut sig = Signature::new();
        let r = parse_rule("%n:cons(a,$x) -> cons(b,%n)", &mut sig).unwrap();
        assert_eq!(r.to_string(), "%n0:cons(a,$x) -> cons(b,%n0)");
        let r = parse_rule("cons(a,$x) -> cons(b,cons(a,$x))", &mut sig).unwrap();
        assert_eq!(r.to_string(), "cons(a,$x) -> cons(b,cons(a,$x))");
        let r = parse_rule("f($x) -> $x", &mut sig).unwrap();
        assert_eq!(r.rhs_root(), r.nodes()[r.lhs_root().index()].succ[0]);
        assert_eq!(parse_rule("$x -> a", &mut sig), Err(Error::LhsRootIsVariable));
        assert_eq!(parse_rule("f($x) -> $y", &mut sig), Err(Error::VariableNotInLhs("y".into())));
    }

    #[test]
    fn rule_files() {
        let text = "# spine\nrho1: cons(a,$x) -> cons(b,cons(a,$x))\n\n%n:cons(a,$x) -> cons(b,%n) # shared\n";
        let grs = parse_grs(text, &mut Signature::new()).unwrap();
        let names: Vec<_> = grs.rules().iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["rho1", "r1"]);
    }
}
