//! Node sets over which the solver chooses labels.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::formula::{Formula, Hole, Pattern, Prop};

use super::SynthError;

pub const DEFAULT_MAX_DEPTH: usize = 6;

/// Label of a free node.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Prop(Prop),
    /// Negation of the proposition labelling the left child.
    Not,
    And,
    Or,
    G,
    F,
    /// Inactive node.
    Nop,
}

impl Label {
    /// Suffix used in the label variable name.
    pub fn tag(&self) -> String {
        match self {
            Label::Prop(p) => format!("p_{p}"),
            Label::Not => "NOT".into(),
            Label::And => "AND".into(),
            Label::Or => "OR".into(),
            Label::G => "G".into(),
            Label::F => "F".into(),
            Label::Nop => "NOP".into(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Label forced by the pattern.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Fixed {
    True,
    False,
    Lit { prop: Prop, negated: bool },
    Var { name: Prop, negated: bool },
    And,
    Or,
    G,
    F,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeNode {
    /// Node whose label variables this node reads. Differs from the node's
    /// own id for duplicated hole occurrences.
    pub label_src: usize,
    /// Evaluate the dual operator (the occurrence stands for the negation).
    pub dual: bool,
    pub hole: usize,
    /// Allowed labels; only meaningful on source nodes.
    pub domain: Vec<Label>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Fixed(Fixed),
    Free(FreeNode),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub kind: NodeKind,
}

impl SkNode {
    pub fn free(&self) -> Option<&FreeNode> {
        match &self.kind {
            NodeKind::Free(f) => Some(f),
            NodeKind::Fixed(_) => None,
        }
    }

    /// A free node owning its label variables.
    pub fn is_source(&self) -> bool {
        matches!(&self.kind, NodeKind::Free(f) if f.label_src == self.id)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoleInfo {
    pub id: usize,
    pub depth: usize,
    /// Root of the source sub-skeleton.
    pub root: usize,
}

/// Tree-shaped node set; node 1 is the root and `nodes[i - 1]` has id `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Skeleton {
    pub nodes: Vec<SkNode>,
    pub alphabet: Vec<Prop>,
    pub placeholders: Vec<Prop>,
    pub holes: Vec<HoleInfo>,
    /// Original (unexpanded) pattern, if any, for sugared printing.
    pub pattern: Option<Pattern>,
}

/// A choice of label for every source node, plus placeholder mappings.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Labeling {
    pub labels: BTreeMap<usize, Label>,
    pub mapping: BTreeMap<Prop, Prop>,
}

struct Builder {
    nodes: Vec<SkNode>,
    alphabet: Vec<Prop>,
    holes: Vec<HoleInfo>,
    /// hole id -> (source root, polarity of the source occurrence)
    first: HashMap<usize, (usize, bool)>,
    max_depth: usize,
}

impl Builder {
    fn push(&mut self, parent: Option<usize>, kind: NodeKind) -> usize {
        let id = self.nodes.len() + 1;
        self.nodes.push(SkNode { id, parent, left: None, right: None, kind });
        id
    }

    fn node(&mut self, id: usize) -> &mut SkNode {
        &mut self.nodes[id - 1]
    }

    /// Complete binary tree of edge-depth `depth`, allocated breadth first so
    /// that a stand-alone tree gets heap numbering (children of i: 2i, 2i+1).
    fn free_tree(&mut self, depth: usize, parent: Option<usize>, hole: usize, dual: bool) -> usize {
        let parent_free = parent.map(|p| self.nodes[p - 1].free().is_some()).unwrap_or(false);
        let root = self.push(parent, NodeKind::Fixed(Fixed::True));
        let mut level = vec![root];
        for d in 0..=depth {
            let mut next = Vec::new();
            for &id in &level {
                let internal = d < depth;
                let has_free_parent = if id == root { parent_free } else { true };
                let mut domain: Vec<Label> = self.alphabet.iter().cloned().map(Label::Prop).collect();
                if internal {
                    domain.extend([Label::Not, Label::And, Label::Or, Label::G, Label::F]);
                }
                if has_free_parent {
                    domain.push(Label::Nop);
                }
                self.node(id).kind = NodeKind::Free(FreeNode { label_src: id, dual, hole, domain });
                if internal {
                    let l = self.push(Some(id), NodeKind::Fixed(Fixed::True));
                    let r = self.push(Some(id), NodeKind::Fixed(Fixed::True));
                    self.node(id).left = Some(l);
                    self.node(id).right = Some(r);
                    next.push(l);
                    next.push(r);
                }
            }
            level = next;
        }
        root
    }

    /// Copy of the source tree rooted at `src`, reading the same labels.
    fn mirror(&mut self, src: usize, parent: Option<usize>, dual: bool) -> usize {
        let s = self.nodes[src - 1].clone();
        let f = s.free().expect("hole nodes are free").clone();
        let id = self.push(parent, NodeKind::Free(FreeNode { label_src: f.label_src, dual, hole: f.hole, domain: vec![] }));
        if let Some(l) = s.left {
            let c = self.mirror(l, Some(id), dual);
            self.node(id).left = Some(c);
        }
        if let Some(r) = s.right {
            let c = self.mirror(r, Some(id), dual);
            self.node(id).right = Some(c);
        }
        id
    }

    fn hole(&mut self, h: &Hole, parent: Option<usize>) -> Result<usize, SynthError> {
        if h.depth > self.max_depth {
            return Err(SynthError::DepthTooLarge { depth: h.depth, cap: self.max_depth });
        }
        match self.first.get(&h.id).copied() {
            None => {
                let root = self.free_tree(h.depth, parent, h.id, h.negated);
                self.first.insert(h.id, (root, h.negated));
                self.holes.push(HoleInfo { id: h.id, depth: h.depth, root });
                Ok(root)
            }
            Some((src, _)) => Ok(self.mirror(src, parent, h.negated)),
        }
    }

    fn pattern(&mut self, p: &Pattern, parent: Option<usize>) -> Result<usize, SynthError> {
        let fixed = |f: Fixed| NodeKind::Fixed(f);
        let (kind, kids): (NodeKind, Vec<&Pattern>) = match p {
            Pattern::Hole(h) => return self.hole(h, parent),
            Pattern::True => (fixed(Fixed::True), vec![]),
            Pattern::False => (fixed(Fixed::False), vec![]),
            Pattern::Atom(a) => (fixed(Fixed::Lit { prop: a.clone(), negated: false }), vec![]),
            Pattern::NegAtom(a) => (fixed(Fixed::Lit { prop: a.clone(), negated: true }), vec![]),
            Pattern::Var(x) => (fixed(Fixed::Var { name: x.clone(), negated: false }), vec![]),
            Pattern::NegVar(x) => (fixed(Fixed::Var { name: x.clone(), negated: true }), vec![]),
            Pattern::And(l, r) => (fixed(Fixed::And), vec![l, r]),
            Pattern::Or(l, r) => (fixed(Fixed::Or), vec![l, r]),
            Pattern::G(c) => (fixed(Fixed::G), vec![c]),
            Pattern::F(c) => (fixed(Fixed::F), vec![c]),
            Pattern::Not(_) | Pattern::Implies(..) | Pattern::Iff(..) => {
                unreachable!("pattern is expanded before encoding")
            }
            Pattern::X(_) => return Err(SynthError::Pattern(crate::formula::PatternError::UnsupportedOperator("X"))),
            Pattern::U(..) => return Err(SynthError::Pattern(crate::formula::PatternError::UnsupportedOperator("U"))),
        };
        let id = self.push(parent, kind);
        if let Some(l) = kids.first() {
            let c = self.pattern(l, Some(id))?;
            self.node(id).left = Some(c);
        }
        if let Some(r) = kids.get(1) {
            let c = self.pattern(r, Some(id))?;
            self.node(id).right = Some(c);
        }
        Ok(id)
    }
}

/// Free complete binary skeleton of edge-depth `depth` over `alphabet`.
pub fn build_skeleton(depth: usize, alphabet: &[Prop]) -> Result<Skeleton, SynthError> {
    build_skeleton_capped(depth, alphabet, DEFAULT_MAX_DEPTH)
}

pub fn build_skeleton_capped(depth: usize, alphabet: &[Prop], cap: usize) -> Result<Skeleton, SynthError> {
    let hole = Pattern::Hole(Hole { id: 0, depth, negated: false });
    skeleton_for_pattern(&hole, alphabet, cap)
}

/// Skeleton for an expanded pattern: pattern nodes are fixed, holes become
/// free sub-skeletons, duplicated hole occurrences read the first
/// occurrence's labels.
pub fn skeleton_for_pattern(p: &Pattern, alphabet: &[Prop], cap: usize) -> Result<Skeleton, SynthError> {
    let expanded = p.expand()?;
    let mut b = Builder {
        nodes: Vec::new(),
        alphabet: alphabet.to_vec(),
        holes: Vec::new(),
        first: HashMap::new(),
        max_depth: cap,
    };
    b.pattern(&expanded, None)?;
    Ok(Skeleton {
        nodes: b.nodes,
        alphabet: alphabet.to_vec(),
        placeholders: expanded.placeholders(),
        holes: b.holes,
        pattern: Some(p.clone()),
    })
}

impl Skeleton {
    pub fn node(&self, id: usize) -> &SkNode {
        &self.nodes[id - 1]
    }

    pub fn sources(&self) -> impl Iterator<Item = &SkNode> {
        self.nodes.iter().filter(|n| n.is_source())
    }

    /// Formula chosen for a hole by `lab`.
    pub fn hole_formula(&self, hole: usize, lab: &Labeling) -> Result<Formula, SynthError> {
        let info = self
            .holes
            .iter()
            .find(|h| h.id == hole)
            .ok_or_else(|| SynthError::Decode(format!("no hole {hole}")))?;
        self.formula_at(info.root, lab)
    }

    fn formula_at(&self, id: usize, lab: &Labeling) -> Result<Formula, SynthError> {
        let n = self.node(id);
        let label = lab
            .labels
            .get(&id)
            .ok_or_else(|| SynthError::Decode(format!("node {id} has no label")))?;
        let left = || n.left.ok_or_else(|| SynthError::Decode(format!("node {id} has no child")));
        Ok(match label {
            Label::Prop(p) => Formula::Atom(p.clone()),
            Label::Not => match self.formula_at(left()?, lab)? {
                Formula::Atom(p) => Formula::NegAtom(p),
                other => return Err(SynthError::Decode(format!("negation over {other} at node {id}"))),
            },
            Label::G => Formula::globally(self.formula_at(left()?, lab)?),
            Label::F => Formula::finally(self.formula_at(left()?, lab)?),
            Label::And | Label::Or => {
                let l = self.formula_at(left()?, lab)?;
                let r = self.formula_at(n.right.expect("binary node"), lab)?;
                if *label == Label::And { Formula::and(l, r) } else { Formula::or(l, r) }
            }
            Label::Nop => return Err(SynthError::Decode(format!("active node {id} labelled NOP"))),
        })
    }

    /// Fills of every hole under `lab`.
    pub fn fills(&self, lab: &Labeling) -> Result<HashMap<usize, Formula>, SynthError> {
        self.holes.iter().map(|h| Ok((h.id, self.hole_formula(h.id, lab)?))).collect()
    }

    /// Embeds `f` into the hole `hole`, labelling inactive nodes NOP.
    /// Returns None if `f` does not fit.
    pub fn embed(&self, hole: usize, f: &Formula, lab: &mut Labeling) -> Option<()> {
        let root = self.holes.iter().find(|h| h.id == hole)?.root;
        self.embed_at(root, f, lab)
    }

    fn embed_at(&self, id: usize, f: &Formula, lab: &mut Labeling) -> Option<()> {
        let n = self.node(id);
        let domain = &n.free()?.domain;
        let (label, left, right): (Label, Option<Formula>, Option<Formula>) = match f {
            Formula::Atom(p) => (Label::Prop(p.clone()), None, None),
            Formula::NegAtom(p) => (Label::Not, Some(Formula::Atom(p.clone())), None),
            Formula::G(c) => (Label::G, Some((**c).clone()), None),
            Formula::F(c) => (Label::F, Some((**c).clone()), None),
            Formula::And(l, r) => (Label::And, Some((**l).clone()), Some((**r).clone())),
            Formula::Or(l, r) => (Label::Or, Some((**l).clone()), Some((**r).clone())),
            _ => return None,
        };
        if !domain.contains(&label) {
            return None;
        }
        lab.labels.insert(id, label);
        match (left, n.left) {
            (Some(c), Some(l)) => self.embed_at(l, &c, lab)?,
            (None, Some(l)) => self.deactivate(l, lab),
            (Some(_), None) => return None,
            (None, None) => {}
        }
        match (right, n.right) {
            (Some(c), Some(r)) => self.embed_at(r, &c, lab)?,
            (None, Some(r)) => self.deactivate(r, lab),
            (Some(_), None) => return None,
            (None, None) => {}
        }
        Some(())
    }

    fn deactivate(&self, id: usize, lab: &mut Labeling) {
        lab.labels.insert(id, Label::Nop);
        let n = self.node(id);
        for c in [n.left, n.right].into_iter().flatten() {
            self.deactivate(c, lab);
        }
    }
}
