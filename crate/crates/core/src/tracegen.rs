//! Seeded synthetic samples from a generator formula.
//!
//! Words are drawn letter by letter. The generator is progressed through
//! each chosen letter into a disjunction of obligation sets for the rest of
//! the word; at each position a letter is drawn uniformly among those that
//! keep some obligation set alive (at the last position, those that
//! discharge one). A dead end restarts the word. Every produced word is
//! re-checked with the classical evaluator.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{holds_table, parse_formula, Formula, Prop};
use crate::sample::{Letter, Sample, Word};

pub const DEFAULT_ATTEMPTS: usize = 10_000;
/// Above this many generator propositions letters are sampled, not enumerated.
const ENUMERATE_LIMIT: usize = 10;
const SAMPLED_LETTERS: usize = 256;
const STATE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("could not generate {kind} trace {index} of length {length} in {attempts} attempts")]
    GenerationFailure { kind: &'static str, index: usize, length: usize, attempts: usize },
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

/// Named generator formulas for common specification patterns.
pub const PRESETS: [(&str, &str); 8] = [
    ("absence1", "G !p"),
    ("absence2", "G(q -> G !p)"),
    ("response1", "G(p -> F s)"),
    ("response2", "G(q -> G(p -> F s))"),
    ("existence1", "F p"),
    ("existence2", "G(!p | F(p & F q))"),
    ("universality1", "G p"),
    ("universality2", "G(p -> G q)"),
];

/// NNF generator formula of a preset.
pub fn preset(name: &str) -> Result<Formula, GenError> {
    let text = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| GenError::UnknownPreset(name.to_string()))?;
    Ok(parse_formula(text).expect("preset parses").to_nnf().expect("preset is GF"))
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub generator: Formula,
    pub num_positive: usize,
    pub num_negative: usize,
    pub length: usize,
    pub noise_vars: usize,
    pub p_noise: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

impl GenConfig {
    /// 20 positives, 1 negative, no noise.
    pub fn new(generator: Formula, length: usize, seed: u64) -> Self {
        GenConfig {
            generator,
            num_positive: 20,
            num_negative: 1,
            length,
            noise_vars: 0,
            p_noise: 0.0,
            seed,
            max_attempts: DEFAULT_ATTEMPTS,
        }
    }

    pub fn with_noise(mut self, vars: usize, p: f64) -> Self {
        self.noise_vars = vars;
        self.p_noise = p;
        self
    }

    pub fn with_counts(mut self, positives: usize, negatives: usize) -> Self {
        self.num_positive = positives;
        self.num_negative = negatives;
        self
    }
}

/// Subformula arena with structural sharing so obligations compare by index.
struct Arena {
    nodes: Vec<Formula>,
    ids: HashMap<Formula, usize>,
}

impl Arena {
    fn intern(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.ids.get(f) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(f.clone());
        self.ids.insert(f.clone(), i);
        i
    }
}

type Clause = Vec<usize>;
type Dnf = BTreeSet<Clause>;

fn product(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = Dnf::new();
    for x in a {
        for y in b {
            let mut c: Clause = x.iter().chain(y).copied().collect();
            c.sort_unstable();
            c.dedup();
            out.insert(c);
        }
    }
    out
}

fn truth() -> Dnf {
    Dnf::from([Clause::new()])
}

/// Obligations for the next position after reading `letter`, as a DNF.
fn progress(arena: &mut Arena, f: &Formula, letter: &Letter, last: bool) -> Dnf {
    match f {
        Formula::True => truth(),
        Formula::False => Dnf::new(),
        Formula::Atom(p) => if letter.contains(p) { truth() } else { Dnf::new() },
        Formula::NegAtom(p) => if letter.contains(p) { Dnf::new() } else { truth() },
        Formula::And(l, r) => {
            let a = progress(arena, l, letter, last);
            if a.is_empty() {
                return a;
            }
            product(&a, &progress(arena, r, letter, last))
        }
        Formula::Or(l, r) => {
            let mut a = progress(arena, l, letter, last);
            a.extend(progress(arena, r, letter, last));
            a
        }
        Formula::G(c) => {
            let now = progress(arena, c, letter, last);
            if last {
                return now;
            }
            let id = arena.intern(f);
            product(&now, &Dnf::from([vec![id]]))
        }
        Formula::F(c) => {
            let mut now = progress(arena, c, letter, last);
            if !last {
                now.insert(vec![arena.intern(f)]);
            }
            now
        }
        Formula::Not(_) | Formula::X(_) | Formula::U(..) => {
            unreachable!("generator validated as NNF-GF")
        }
    }
}

fn step(arena: &mut Arena, state: &Dnf, letter: &Letter, last: bool) -> Dnf {
    let mut out = Dnf::new();
    for clause in state {
        let mut acc = truth();
        for &ob in clause {
            let f = arena.nodes[ob].clone();
            acc = product(&acc, &progress(arena, &f, letter, last));
            if acc.is_empty() {
                break;
            }
        }
        out.extend(acc);
    }
    // keep only minimal clauses: a superset of another clause is redundant
    let clauses: Vec<Clause> = out.into_iter().collect();
    let minimal: Dnf = clauses
        .iter()
        .filter(|c| !clauses.iter().any(|d| d != *c && d.len() < c.len() && d.iter().all(|x| c.contains(x))))
        .cloned()
        .collect();
    minimal
}

struct Sampler {
    arena: Arena,
    root: usize,
    props: Vec<Prop>,
}

impl Sampler {
    fn new(f: &Formula) -> Self {
        let mut arena = Arena { nodes: Vec::new(), ids: HashMap::new() };
        let root = arena.intern(f);
        Sampler { arena, root, props: f.props() }
    }

    fn letter_from_mask(&self, mask: u64) -> Letter {
        Letter::new(
            self.props
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        )
    }

    fn options(&self, rng: &mut ChaCha8Rng) -> Vec<Letter> {
        let k = self.props.len();
        if k <= ENUMERATE_LIMIT {
            (0..1u64 << k).map(|m| self.letter_from_mask(m)).collect()
        } else {
            (0..SAMPLED_LETTERS)
                .map(|_| {
                    let props = self.props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                    Letter::new(props)
                })
                .collect()
        }
    }

    /// One attempt at a word of `length` letters; None on a dead end.
    fn attempt(&mut self, length: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Letter>> {
        let mut state = Dnf::from([vec![self.root]]);
        let mut word = Vec::with_capacity(length);
        for t in 0..length {
            let last = t + 1 == length;
            let mut viable = Vec::new();
            for letter in self.options(rng) {
                let next = step(&mut self.arena, &state, &letter, last);
                let alive = if last { next.contains(&Clause::new()) } else { !next.is_empty() };
                if alive && next.len() <= STATE_LIMIT {
                    viable.push((letter, next));
                }
            }
            if viable.is_empty() {
                return None;
            }
            let (letter, next) = viable.swap_remove(rng.gen_range(0..viable.len()));
            word.push(letter);
            state = next;
        }
        Some(word)
    }
}

fn draw(
    sampler: &mut Sampler,
    check: &Formula,
    cfg: &GenConfig,
    kind: &'static str,
    stream: u64,
    index: usize,
) -> Result<Vec<Letter>, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream << 32 | index as u64);
    for _ in 0..cfg.max_attempts {
        if let Some(letters) = sampler.attempt(cfg.length, &mut rng) {
            let w = Word::new(letters.clone()).expect("length >= 1");
            if holds_table(check, &w)[0] {
                return Ok(letters);
            }
        }
    }
    Err(GenError::GenerationFailure { kind, index, length: cfg.length, attempts: cfg.max_attempts })
}

fn add_noise(letters: &mut [Letter], names: &[Prop], p: f64, rng: &mut ChaCha8Rng) {
    if names.is_empty() {
        return;
    }
    for l in letters.iter_mut() {
        let mut props = l.props().to_vec();
        for n in names {
            if rng.gen_bool(p) {
                props.push(n.clone());
            }
        }
        *l = Letter::new(props);
    }
}

pub fn noise_names(k: usize) -> Vec<Prop> {
    (0..k).map(|i| Prop::new(&format!("noise{i}"))).collect()
}

/// Draws a sample whose positives satisfy and whose negatives violate the
/// generator. Identical configurations give identical samples.
pub fn generate_sample(cfg: &GenConfig) -> Result<Sample, GenError> {
    if cfg.length == 0 {
        return Err(GenError::InvalidConfig("length must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.p_noise) || cfg.p_noise.is_nan() {
        return Err(GenError::InvalidConfig(format!("p_noise = {} outside [0,1]", cfg.p_noise)));
    }
    let gen = cfg
        .generator
        .to_nnf()
        .map_err(|e| GenError::InvalidConfig(e.to_string()))?;
    if !gen.is_nnf_gf() {
        return Err(GenError::InvalidConfig("generator must be in the GF fragment".into()));
    }
    let noise = noise_names(cfg.noise_vars);
    let gen_props = gen.props();
    if let Some(clash) = noise.iter().find(|n| gen_props.contains(n)) {
        return Err(GenError::InvalidConfig(format!("noise proposition {clash} occurs in the generator")));
    }
    let neg_gen = gen.negated_nnf().expect("GF formulas negate");

    let mut pos_sampler = Sampler::new(&gen);
    let mut neg_sampler = Sampler::new(&neg_gen);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    noise_rng.set_stream(u64::MAX);

    let mut build = |letters: Vec<Letter>| {
        let mut letters = letters;
        add_noise(&mut letters, &noise, cfg.p_noise, &mut noise_rng);
        Word::new(letters).expect("length >= 1")
    };

    let mut positives = Vec::with_capacity(cfg.num_positive);
    for i in 0..cfg.num_positive {
        positives.push(build(draw(&mut pos_sampler, &gen, cfg, "positive", 1, i)?));
    }
    let mut negatives = Vec::with_capacity(cfg.num_negative);
    for i in 0..cfg.num_negative {
        negatives.push(build(draw(&mut neg_sampler, &neg_gen, cfg, "negative", 2, i)?));
    }
    Ok(Sample::new(positives, negatives).expect("positives and negatives are disjoint"))
}
