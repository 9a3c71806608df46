use std::fmt;

use crate::logic::Sym;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Head,
    Body,
}

/// How many answers of a body literal saturation keeps per input binding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Recall {
    Bounded(usize),
    Unbounded,
}

impl Recall {
    pub fn limit(self) -> usize {
        match self {
            Recall::Bounded(n) => n,
            Recall::Unbounded => usize::MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// `+type`: must be bound to an existing term of that type.
    Input,
    /// `-type`: introduces (or reuses) a variable of that type.
    Output,
    /// `#type`: a constant taken from the ground instance.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placemarker {
    pub polarity: Polarity,
    pub type_name: Sym,
}

/// A `modeh`/`modeb` declaration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeDecl {
    pub kind: ModeKind,
    pub recall: Recall,
    pub pred: Sym,
    pub args: Vec<Placemarker>,
}

impl ModeDecl {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn positions(&self, polarity: Polarity) -> impl Iterator<Item = usize> + '_ {
        self.args.iter().enumerate().filter(move |(_, p)| p.polarity == polarity).map(|(i, _)| i)
    }
}

impl fmt::Display for Placemarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigil = match self.polarity {
            Polarity::Input => '+',
            Polarity::Output => '-',
            Polarity::Constant => '#',
        };
        write!(f, "{sigil}{}", self.type_name)
    }
}

impl fmt::Display for ModeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ModeKind::Head => "modeh",
            ModeKind::Body => "modeb",
        };
        let recall = match self.recall {
            Recall::Bounded(n) => n.to_string(),
            Recall::Unbounded => "*".to_string(),
        };
        write!(f, "{kind}({recall}, {}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")).")
    }
}
