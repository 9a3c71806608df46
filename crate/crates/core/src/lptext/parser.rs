use std::collections::HashMap;

use super::lexer::{tokenize, Spanned, Tok};
use super::{LpError, ParseError};
use crate::logic::{sym, Atom, Clause, ExampleSet, Program, Sym, Term};
use crate::mdie::{ModeDecl, ModeKind, Placemarker, Polarity, Recall};
use crate::mil::{MetaAtom, Metarule, PredSlot};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (line, column) = self.here();
        ParseError::new(line, column, expected, &self.peek().describe())
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Term::int(i))
            }
            Tok::Ident(name) => {
                self.bump();
                if is_var_name(&name) {
                    return Ok(Term::var(&name));
                }
                if *self.peek() == Tok::LParen {
                    let args = self.args()?;
                    Ok(Term::Compound(sym(&name), args))
                } else {
                    Ok(Term::sym(&name))
                }
            }
            _ => Err(self.error("a term")),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(s) if !is_var_name(&s) => s,
            _ => return Err(self.error("a predicate name")),
        };
        self.bump();
        let args = if *self.peek() == Tok::LParen { self.args()? } else { Vec::new() };
        Ok(Atom::new(&name, args))
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.eat(&Tok::Neck) {
            body.push(self.atom()?);
            while self.eat(&Tok::Comma) {
                body.push(self.atom()?);
            }
        }
        self.expect(Tok::Period)?;
        Ok(Clause::new(head, body))
    }
}

/// Parses a program: facts and rules, one per `.`-terminated declaration.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let mut prog = Program::new();
    while !p.at_eof() {
        prog.push(p.clause()?);
    }
    Ok(prog)
}

/// Parses exactly one clause.
pub fn parse_clause(text: &str) -> Result<Clause, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.clause()?;
    if !p.at_eof() {
        return Err(p.error("end of input"));
    }
    Ok(c)
}

/// Parses one atom, with or without a trailing period.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.atom()?;
    p.eat(&Tok::Period);
    if !p.at_eof() {
        return Err(p.error("end of input"));
    }
    Ok(a)
}

fn term_to_atom(t: Term) -> Option<Atom> {
    match t {
        Term::Compound(f, args) => Some(Atom { pred: f, args }),
        Term::Const(crate::logic::Const::Sym(s)) => Some(Atom { pred: s, args: Vec::new() }),
        _ => None,
    }
}

/// Parses `pos(atom).` and `neg(atom).` lines.
pub fn parse_examples(text: &str) -> Result<ExampleSet, LpError> {
    let mut p = Parser::new(text)?;
    let mut ex = ExampleSet::default();
    while !p.at_eof() {
        let (line, column) = p.here();
        let label = p.ident("pos or neg")?;
        let positive = match label.as_str() {
            "pos" => true,
            "neg" => false,
            _ => return Err(LpError::BadExample { line, column, found: label }),
        };
        p.expect(Tok::LParen)?;
        let (al, ac) = p.here();
        let t = p.term()?;
        let atom = term_to_atom(t.clone()).ok_or(LpError::BadExample { line: al, column: ac, found: t.to_string() })?;
        if !atom.is_ground() {
            return Err(LpError::NonGroundExample { line: al, column: ac, found: atom.to_string() });
        }
        p.expect(Tok::RParen)?;
        p.expect(Tok::Period)?;
        if positive {
            ex.positives.push(atom);
        } else {
            ex.negatives.push(atom);
        }
    }
    Ok(ex)
}

/// Parses `modeh(recall, pred(+t,-t,#t)).` / `modeb(...)` declarations. A
/// leading `:-` directive marker is accepted.
pub fn parse_modes(text: &str) -> Result<Vec<ModeDecl>, LpError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_eof() {
        p.eat(&Tok::Neck);
        let (line, column) = p.here();
        let kind = match p.ident("modeh or modeb")?.as_str() {
            "modeh" => ModeKind::Head,
            "modeb" => ModeKind::Body,
            other => return Err(ParseError::new(line, column, "modeh or modeb", &format!("'{other}'")).into()),
        };
        p.expect(Tok::LParen)?;
        let (rl, rc) = p.here();
        let recall = match p.peek().clone() {
            Tok::Star => Recall::Unbounded,
            Tok::Int(n) if n >= 1 => Recall::Bounded(n as usize),
            Tok::Int(n) => return Err(LpError::InvalidRecall { line: rl, column: rc, found: n.to_string() }),
            _ => return Err(p.error("a recall (positive integer or '*')").into()),
        };
        p.bump();
        p.expect(Tok::Comma)?;
        let (nl, nc) = p.here();
        let pred = p.ident("a predicate name")?;
        if is_var_name(&pred) {
            return Err(ParseError::new(nl, nc, "a predicate name", &format!("'{pred}'")).into());
        }
        p.expect(Tok::LParen)?;
        let mut args = vec![placemarker(&mut p)?];
        while p.eat(&Tok::Comma) {
            args.push(placemarker(&mut p)?);
        }
        p.expect(Tok::RParen)?;
        p.expect(Tok::RParen)?;
        p.expect(Tok::Period)?;
        out.push(ModeDecl { kind, recall, pred: sym(&pred), args });
    }
    Ok(out)
}

fn placemarker(p: &mut Parser) -> Result<Placemarker, LpError> {
    let (line, column) = p.here();
    let polarity = match p.peek() {
        Tok::Plus => Polarity::Input,
        Tok::Minus => Polarity::Output,
        Tok::Hash => Polarity::Constant,
        Tok::Ident(_) | Tok::Int(_) | Tok::Star | Tok::Gt | Tok::Bar | Tok::Colon => {
            return Err(LpError::UnknownPlacemarker { line, column, found: p.peek().describe() });
        }
        _ => return Err(p.error("a placemarker").into()),
    };
    p.bump();
    let type_name = p.ident("a type name")?;
    Ok(Placemarker { polarity, type_name: sym(&type_name) })
}

fn meta_atom(p: &mut Parser) -> Result<MetaAtom, LpError> {
    let name = p.ident("a predicate variable or symbol")?;
    let pred = if is_var_name(&name) { PredSlot::Var(sym(&name)) } else { PredSlot::Fixed(sym(&name)) };
    let (line, column) = p.here();
    p.expect(Tok::LParen)?;
    let mut args: Vec<Sym> = vec![sym(&p.ident("a first-order variable")?)];
    while p.eat(&Tok::Comma) {
        args.push(sym(&p.ident("a first-order variable")?));
    }
    p.expect(Tok::RParen)?;
    if args.len() > 2 {
        return Err(LpError::MetaruleArity { line, column, arity: args.len() });
    }
    Ok(MetaAtom { pred, args })
}

/// Parses named metarules: `chain: P(x,y) :- Q(x,z), R(z,y) | P > Q.`
/// The `| ...` order annotation is optional.
pub fn parse_metarules(text: &str) -> Result<Vec<Metarule>, LpError> {
    let mut p = Parser::new(text)?;
    let mut out: Vec<Metarule> = Vec::new();
    let mut seen: HashMap<String, ()> = HashMap::new();
    while !p.at_eof() {
        let (line, column) = p.here();
        let name = p.ident("a metarule name")?;
        if seen.insert(name.clone(), ()).is_some() {
            return Err(LpError::DuplicateMetarule { line, column, name });
        }
        p.expect(Tok::Colon)?;
        let head = meta_atom(&mut p)?;
        let mut body = Vec::new();
        if p.eat(&Tok::Neck) {
            body.push(meta_atom(&mut p)?);
            while p.eat(&Tok::Comma) {
                body.push(meta_atom(&mut p)?);
            }
        }
        let mut order = Vec::new();
        if p.eat(&Tok::Bar) {
            loop {
                let hi = p.ident("a predicate variable")?;
                p.expect(Tok::Gt)?;
                let lo = p.ident("a predicate variable")?;
                order.push((sym(&hi), sym(&lo)));
                if !p.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        p.expect(Tok::Period)?;
        out.push(Metarule { name: sym(&name), head, body, order });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ground_fact() {
        let p = parse_program("color(p1,red).").unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.clauses()[0].is_ground_fact());
        assert_eq!(p.clauses()[0].head, Atom::new("color", vec![Term::sym("p1"), Term::sym("red")]));
    }

    #[test]
    fn empty_and_comment_only_input() {
        assert!(parse_program("").unwrap().is_empty());
        assert!(parse_program("% nothing here\n  \n").unwrap().is_empty());
    }

    #[test]
    fn rule_with_variables_and_integers() {
        let c = parse_clause("speed(X, 30) :- has_word(X, W), closely_match(W, 30).").unwrap();
        assert_eq!(c.body.len(), 2);
        assert_eq!(c.head.args[1], Term::int(30));
        assert!(c.head.args[0].is_var());
        assert_eq!(c.to_string(), "speed(X,30) :- has_word(X,W), closely_match(W,30).");
    }

    #[test]
    fn error_position_points_at_offending_token() {
        let e = parse_program("p(a).\nq(b) r.").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        let e = parse_program("p(a).\n  q(b$).").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn modes_from_the_sign_task() {
        let m = parse_modes("modeb(*, colour(+sign,#colour)).").unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].kind, ModeKind::Body);
        assert_eq!(m[0].recall, Recall::Unbounded);
        let m = parse_modes(":- modeh(1, traffic_sign(+sign,#class)).").unwrap();
        assert_eq!(m[0].kind, ModeKind::Head);
        assert_eq!(m[0].recall, Recall::Bounded(1));
        assert_eq!(m[0].to_string(), "modeh(1, traffic_sign(+sign,#class)).");
    }

    #[test]
    fn zero_recall_and_bare_type_rejected() {
        assert!(matches!(parse_modes("modeb(0, p(+t))."), Err(LpError::InvalidRecall { .. })));
        assert!(matches!(parse_modes("modeb(1, p(t))."), Err(LpError::UnknownPlacemarker { .. })));
    }

    #[test]
    fn metarules_parse_and_print() {
        let text = "chain: P(x,y) :- Q(x,z), R(z,y).\nidentify: P(x,y) :- Q(x,y).\n";
        let rules = parse_metarules(text).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].pred_vars().len(), 3);
        assert_eq!(rules[1].body.len(), 1);
        let ordered = parse_metarules("recursion: P(x,y) :- Q(x,z), P(z,y) | P > Q.").unwrap();
        assert_eq!(ordered[0].order, vec![(sym("P"), sym("Q"))]);
        assert!(ordered[0].is_recursive());
        assert_eq!(ordered[0].to_string(), "recursion: P(x,y) :- Q(x,z), P(z,y) | P > Q.");
    }

    #[test]
    fn duplicate_and_wide_metarules_rejected() {
        let dup = "chain: P(x,y) :- Q(x,z), R(z,y).\nchain: P(x,y) :- Q(x,y).";
        assert!(matches!(parse_metarules(dup), Err(LpError::DuplicateMetarule { line: 2, .. })));
        assert!(matches!(parse_metarules("w: P(x,y,z) :- Q(x)."), Err(LpError::MetaruleArity { .. })));
    }

    #[test]
    fn examples_split_by_label() {
        let ex = parse_examples("pos(traffic_sign(p1,stop_sign)).\nneg(traffic_sign(n1,stop_sign)).").unwrap();
        assert_eq!(ex.positives.len(), 1);
        assert_eq!(ex.negatives.len(), 1);
        assert!(matches!(parse_examples("pos(p(X))."), Err(LpError::NonGroundExample { .. })));
        assert!(matches!(parse_examples("maybe(p(a))."), Err(LpError::BadExample { .. })));
    }
}
