//! The question DSL: abstract syntax, canonical printing, closures, and
//! grammar enumeration.
//!
//! Every question is a unary chain over one of two leaves, so a question's
//! subterms are exactly the suffixes of its spine.

use std::fmt;

use crate::template::SetTemplate;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    /// `weight`: the hidden value itself.
    Direct,
    /// `other(q)`: what would the other guard say to q.
    AskOther(Box<Question>),
    /// `you(q)`: what would you yourself say if asked q.
    WouldSayYou(Box<Question>),
    /// `could(q)`: a value you could give if asked q.
    CouldProvide(Box<Question>),
    /// `could(self)`: a value you could give if asked this very question.
    CouldProvideSelf,
    /// `restrict({..}, q)`: q with every reply confined to the
    /// instantiated pair.
    Restricted(SetTemplate, Box<Question>),
    /// `avoid(opposite, q)`: a value a guard of the opposite role would
    /// never give to q.
    OppositeAvoids(Box<Question>),
}

impl Question {
    /// The wrapped subquestion, if any.
    pub fn inner(&self) -> Option<&Question> {
        match self {
            Question::Direct | Question::CouldProvideSelf => None,
            Question::AskOther(q)
            | Question::WouldSayYou(q)
            | Question::CouldProvide(q)
            | Question::OppositeAvoids(q) => Some(q),
            Question::Restricted(_, q) => Some(q),
        }
    }

    /// Nesting depth; leaves count 1.
    pub fn depth(&self) -> usize {
        1 + self.inner().map_or(0, Question::depth)
    }

    /// All subquestions including the question itself, innermost first.
    pub fn closure(&self) -> Vec<Question> {
        let mut out = self.inner().map_or_else(Vec::new, Question::closure);
        out.push(self.clone());
        out
    }

    /// True when the chain bottoms out in `could(self)`.
    pub fn contains_self_reference(&self) -> bool {
        match self {
            Question::CouldProvideSelf => true,
            _ => self.inner().is_some_and(Question::contains_self_reference),
        }
    }

    pub fn contains_ask_other(&self) -> bool {
        matches!(self, Question::AskOther(_))
            || self.inner().is_some_and(Question::contains_ask_other)
    }

    /// Templates appearing anywhere on the spine, outermost first.
    pub fn templates(&self) -> Vec<SetTemplate> {
        let mut out = Vec::new();
        let mut cur = Some(self);
        while let Some(q) = cur {
            if let Question::Restricted(t, _) = q {
                out.push(*t);
            }
            cur = q.inner();
        }
        out
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Question::Direct => write!(f, "weight"),
            Question::CouldProvideSelf => write!(f, "could(self)"),
            Question::AskOther(q) => write!(f, "other({q})"),
            Question::WouldSayYou(q) => write!(f, "you({q})"),
            Question::CouldProvide(q) => write!(f, "could({q})"),
            Question::OppositeAvoids(q) => write!(f, "avoid(opposite, {q})"),
            Question::Restricted(t, q) => write!(f, "restrict({t}, {q})"),
        }
    }
}

/// Every distinct question of depth at most `max_depth`, shallowest layer
/// first. Within a layer the wrappers run in a fixed order (other, you,
/// could, avoid, then restrict per template) over the previous layer.
pub fn enumerate_grammar(max_depth: usize, templates: &[SetTemplate]) -> Vec<Question> {
    let mut all = Vec::new();
    if max_depth == 0 {
        return all;
    }
    let mut layer = vec![Question::Direct, Question::CouldProvideSelf];
    all.extend(layer.iter().cloned());
    for _ in 1..max_depth {
        let mut next = Vec::new();
        for q in &layer {
            next.push(Question::AskOther(Box::new(q.clone())));
        }
        for q in &layer {
            next.push(Question::WouldSayYou(Box::new(q.clone())));
        }
        for q in &layer {
            next.push(Question::CouldProvide(Box::new(q.clone())));
        }
        for q in &layer {
            next.push(Question::OppositeAvoids(Box::new(q.clone())));
        }
        for t in templates {
            for q in &layer {
                next.push(Question::Restricted(*t, Box::new(q.clone())));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}
