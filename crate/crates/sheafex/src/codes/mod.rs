//! Cocycle codes `Z⁰(X, F) ⊆ Σ^{X(0)}` with their natural 2-query tester.

mod basis_line;

use serde::Serialize;

pub use basis_line::{basis_line_cb0, line_directions, BasisLineResult};

use crate::cohomology::{cohomology_spaces, theorem_bound_for, z0_cochains, Expansion, TheoremBound};
use crate::complex::{SimpleGraph, WeightedComplex};
use crate::error::{budget, Error, Result};
use crate::rng::seeded;
use crate::scalar::{ser_opt_rational, Rational};
use crate::sheaf::{
    check_conditions, quotient_by_subgroups, AbelianGroup, AugmentedSheaf, ConditionOptions, ConditionReport, Subgroup,
    SubgroupAssignment,
};
use crate::spectral::SubsetMode;

/// Default cap on the number of words an exhaustive tester scan visits.
pub const DEFAULT_WORD_BUDGET: u128 = 1 << 22;

/// Coordinate embedding `F(v) ↪ Σ`: entry `j` of `slots[v]` names the
/// ambient column copied into coordinate `j` of Σ, or `None` for zero.
pub type Embedding = Vec<Vec<Option<usize>>>;

/// The code `Z⁰(X, F)` inside `Σ^{X(0)}`.
#[derive(Clone, Debug)]
pub struct SheafCode {
    sheaf: AugmentedSheaf,
    alphabet: AbelianGroup,
    slots: Embedding,
    /// Codewords as canonical representatives, sorted.
    words: Vec<Vec<Vec<u32>>>,
    /// Set when the sheaf is a quotient of the constant augmented sheaf.
    assignment: Option<SubgroupAssignment>,
}

/// Canonical embedding: identity coordinates when some `F(v)` is all of
/// `R`, otherwise the free columns of each `F(v)` packed to the front.
fn canonical_embedding(s: &AugmentedSheaf) -> Result<(AbelianGroup, Embedding)> {
    let g = s.ambient();
    let n = s.num_vertices();
    if g.field().is_none() {
        if (0..n).all(|v| s.vertex_sub(v).is_trivial()) {
            let id = (0..g.rank()).map(Some).collect::<Vec<_>>();
            return Ok((g.clone(), vec![id; n]));
        }
        return Err(Error::EmbeddingInvalid("no canonical embedding of proper quotients of a cyclic product".into()));
    }
    let free: Vec<Vec<usize>> = (0..n).map(|v| s.vertex_sub(v).free_columns(g).expect("linear")).collect();
    let d = free.iter().map(Vec::len).max().unwrap_or(0);
    let slots = if d == g.rank() {
        free.iter().map(|fr| (0..d).map(|j| fr.contains(&j).then_some(j)).collect()).collect()
    } else {
        free.iter().map(|fr| (0..d).map(|j| fr.get(j).copied()).collect()).collect()
    };
    Ok((AbelianGroup::gf(g.moduli()[0], d)?, slots))
}

fn check_embedding(s: &AugmentedSheaf, sigma: &AbelianGroup, slots: &Embedding) -> Result<()> {
    let g = s.ambient();
    let bad = |m: String| Err(Error::EmbeddingInvalid(m));
    if slots.len() != s.num_vertices() {
        return bad(format!("{} vertex embeddings for {} vertices", slots.len(), s.num_vertices()));
    }
    if sigma.moduli().iter().any(|&m| !g.moduli().contains(&m)) && sigma.rank() > 0 {
        return bad("alphabet and ambient moduli differ".into());
    }
    for (v, sl) in slots.iter().enumerate() {
        if sl.len() != sigma.rank() {
            return bad(format!("vertex {v}: {} slots for an alphabet of rank {}", sl.len(), sigma.rank()));
        }
        let used: Vec<usize> = sl.iter().flatten().copied().collect();
        let mut sorted = used.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != used.len() {
            return bad(format!("vertex {v}: a column is used twice"));
        }
        let free = match s.vertex_sub(v).free_columns(g) {
            Some(fr) => fr,
            None => (0..g.rank()).collect(),
        };
        if sorted != free {
            return bad(format!("vertex {v}: slots {used:?} do not cover the free columns {free:?} exactly"));
        }
        for (j, c) in sl.iter().enumerate() {
            if let Some(c) = c {
                if sigma.moduli()[j] != g.moduli()[*c] {
                    return bad(format!("vertex {v}: coordinate {j} and column {c} have different moduli"));
                }
            }
        }
    }
    Ok(())
}

/// Enumerates `Z⁰(X, F)` and fixes the embedding into Σ; `embedding` of
/// `None` picks the canonical coordinate embedding.
pub fn z0_code(
    s: &AugmentedSheaf,
    embedding: Option<(AbelianGroup, Embedding)>,
    budget_cap: u128,
) -> Result<SheafCode> {
    let (alphabet, slots) = match embedding {
        Some(e) => e,
        None => canonical_embedding(s)?,
    };
    check_embedding(s, &alphabet, &slots)?;
    let words = z0_cochains(s, budget_cap)?.into_iter().map(|c| c.values).collect();
    Ok(SheafCode { sheaf: s.clone(), alphabet, slots, words, assignment: None })
}

/// [`z0_code`] for `R̄/𝒢`, remembering the assignment so that
/// [`tester_metrics`] can use the structural solver.
pub fn quotient_code(x: &WeightedComplex, a: &SubgroupAssignment, budget_cap: u128) -> Result<SheafCode> {
    let s = quotient_by_subgroups(x, a)?;
    let mut code = z0_code(&s, None, budget_cap)?;
    code.assignment = Some(a.clone());
    Ok(code)
}

impl SheafCode {
    pub fn sheaf(&self) -> &AugmentedSheaf {
        &self.sheaf
    }
    pub fn alphabet(&self) -> &AbelianGroup {
        &self.alphabet
    }
    pub fn len(&self) -> usize {
        self.words.len()
    }
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
    /// Codewords as canonical representatives of each `F(v)`.
    pub fn cochains(&self) -> &[Vec<Vec<u32>>] {
        &self.words
    }
    /// Codewords as words over Σ.
    pub fn codewords(&self) -> Vec<Vec<Vec<u32>>> {
        self.words.iter().map(|w| self.embed_word(w)).collect()
    }

    pub fn embed(&self, v: usize, rep: &[u32]) -> Vec<u32> {
        self.slots[v].iter().map(|c| c.map_or(0, |c| rep[c])).collect()
    }

    pub fn embed_word(&self, w: &[Vec<u32>]) -> Vec<Vec<u32>> {
        w.iter().enumerate().map(|(v, r)| self.embed(v, r)).collect()
    }

    /// The element of `F(v)` a symbol stands for, or `None` off the image.
    pub fn pull(&self, v: usize, sym: &[u32]) -> Option<Vec<u32>> {
        let mut rep = self.sheaf.ambient().zero();
        for (j, c) in self.slots[v].iter().enumerate() {
            match c {
                Some(c) => rep[*c] = sym[j],
                None if sym[j] != 0 => return None,
                None => {}
            }
        }
        Some(rep)
    }

    /// Whether the tester accepts `word` on edge `e`.
    pub fn accepts(&self, word: &[Vec<u32>], e: usize) -> bool {
        let face = &self.sheaf.complex().edges()[e];
        let (a, b) = (face[0] as usize, face[1] as usize);
        match (self.pull(a, &word[a]), self.pull(b, &word[b])) {
            (Some(x), Some(y)) => self.sheaf.res_edge_vertex(e, 0, &x) == self.sheaf.res_edge_vertex(e, 1, &y),
            _ => false,
        }
    }

    /// Probability that the tester rejects `word`.
    pub fn rejection(&self, word: &[Vec<u32>]) -> Rational {
        let w = self.sheaf.complex().edge_weights();
        (0..w.len()).filter(|&e| !self.accepts(word, e)).map(|e| w[e].clone()).sum()
    }

    /// `min_c w({v : word(v) ≠ c(v)})` over codewords.
    pub fn distance_to_code(&self, word: &[Vec<u32>]) -> Rational {
        let w = self.sheaf.complex().vertex_weights();
        self.codewords()
            .iter()
            .map(|c| (0..w.len()).filter(|&v| c[v] != word[v]).map(|v| w[v].clone()).sum::<Rational>())
            .min()
            .unwrap_or_default()
    }

    pub fn contains(&self, word: &[Vec<u32>]) -> bool {
        self.codewords().iter().any(|c| c == word)
    }

    /// `log|code| / (n·log|Σ|)`.
    pub fn rate(&self) -> f64 {
        let n = self.sheaf.num_vertices() as f64;
        let sigma = self.alphabet.order() as f64;
        if sigma <= 1.0 || n == 0.0 {
            return 0.0;
        }
        (self.words.len() as f64).ln() / (n * sigma.ln())
    }

    /// Smallest `‖c‖` over nonzero codewords; `None` for the zero code.
    pub fn distance(&self) -> Option<Rational> {
        let w = self.sheaf.complex().vertex_weights();
        self.words
            .iter()
            .filter(|c| c.iter().any(|x| x.iter().any(|&y| y != 0)))
            .map(|c| (0..w.len()).filter(|&v| c[v].iter().any(|&y| y != 0)).map(|v| w[v].clone()).sum())
            .min()
    }
}

/// Words the tester is minimized over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WordSpace {
    /// `Π_v F(v)`: the membership clause never fires.
    Product,
    /// `Σ^{X(0)}`.
    Alphabet,
}

/// How the soundness figure was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SoundnessMethod {
    Exhaustive,
    /// Exact, through [`basis_line_cb0`].
    Structural,
    Sampled { seed: u64, trials: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct TesterReport {
    pub method: SoundnessMethod,
    pub word_space: WordSpace,
    /// `min rej(f)/dist(f, code)` over words off the code.
    pub soundness: Expansion,
    pub upper_bound_only: bool,
    #[serde(serialize_with = "ser_opt_rational")]
    pub distance: Option<Rational>,
    pub rate: f64,
    pub code_size: usize,
    pub alphabet_order: u64,
    /// Binding word, over Σ.
    pub witness: Option<Vec<Vec<u32>>>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub witness_rejection: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub witness_distance: Option<Rational>,
    pub words_visited: u128,
}

/// Word scan with incremental rejection and per-codeword distances.
struct WordScan {
    /// Symbols allowed at each vertex, sorted.
    symbols: Vec<Vec<Vec<u32>>>,
    /// `restr[e][side][i]`: restriction of symbol `i` at that endpoint,
    /// `None` when the symbol is off the image of `F(v)`.
    restr: Vec<[Vec<Option<Vec<u32>>>; 2]>,
    ends: Vec<[usize; 2]>,
    incident: Vec<Vec<usize>>,
    ew: Vec<u128>,
    vw: Vec<u128>,
    denom: u64,
    /// Codewords as symbol indices.
    targets: Vec<Vec<usize>>,
}

impl WordScan {
    fn new(code: &SheafCode, space: WordSpace) -> Result<Self> {
        let s = &code.sheaf;
        let x = s.complex();
        let sw = crate::complex::ScaledWeights::new(x)?;
        let n = s.num_vertices();
        let symbols: Vec<Vec<Vec<u32>>> = (0..n)
            .map(|v| -> Result<Vec<Vec<u32>>> {
                let mut out: Vec<Vec<u32>> = match space {
                    WordSpace::Product => {
                        s.vertex_sub(v).transversal(s.ambient())?.iter().map(|r| code.embed(v, r)).collect()
                    }
                    WordSpace::Alphabet => code.alphabet.elements().collect(),
                };
                out.sort();
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut ends = Vec::new();
        let mut incident = vec![Vec::new(); n];
        let mut restr = Vec::new();
        for (e, face) in x.edges().iter().enumerate() {
            let (a, b) = (face[0] as usize, face[1] as usize);
            ends.push([a, b]);
            incident[a].push(e);
            incident[b].push(e);
            let side = |k: usize, v: usize| {
                symbols[v].iter().map(|sym| code.pull(v, sym).map(|r| s.res_edge_vertex(e, k, &r))).collect()
            };
            restr.push([side(0, a), side(1, b)]);
        }
        let targets = code
            .codewords()
            .iter()
            .map(|c| (0..n).map(|v| symbols[v].binary_search(&c[v]).expect("codeword symbols are allowed")).collect())
            .collect();
        Ok(WordScan {
            symbols,
            restr,
            ends,
            incident,
            ew: sw.edge.iter().map(|&w| w as u128).collect(),
            vw: sw.vertex.iter().map(|&w| w as u128).collect(),
            denom: sw.denom,
            targets,
        })
    }

    fn size(&self) -> u128 {
        self.symbols.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    fn rejects(&self, e: usize, idx: &[usize]) -> bool {
        let [a, b] = self.ends[e];
        match (&self.restr[e][0][idx[a]], &self.restr[e][1][idx[b]]) {
            (Some(x), Some(y)) => x != y,
            _ => true,
        }
    }

    fn rej(&self, idx: &[usize]) -> u128 {
        (0..self.ends.len()).filter(|&e| self.rejects(e, idx)).map(|e| self.ew[e]).sum()
    }

    fn dist(&self, idx: &[usize]) -> u128 {
        self.targets
            .iter()
            .map(|t| (0..idx.len()).filter(|&v| t[v] != idx[v]).map(|v| self.vw[v]).sum())
            .min()
            .unwrap_or(0)
    }

    fn word(&self, idx: &[usize]) -> Vec<Vec<u32>> {
        idx.iter().enumerate().map(|(v, &i)| self.symbols[v][i].clone()).collect()
    }

    /// Odometer over all words, last vertex fastest; keeps the first
    /// minimizer, which is the lexicographically smallest word.
    fn exhaustive(&self) -> (Option<(u128, u128, Vec<usize>)>, u128) {
        let n = self.symbols.len();
        let mut idx = vec![0usize; n];
        let mut rej = self.rej(&idx);
        let mut dis: Vec<u128> = self
            .targets
            .iter()
            .map(|t| (0..n).filter(|&v| t[v] != idx[v]).map(|v| self.vw[v]).sum())
            .collect();
        let mut best: Option<(u128, u128, Vec<usize>)> = None;
        let mut visited = 0u128;
        loop {
            visited += 1;
            let d = dis.iter().copied().min().unwrap_or(0);
            if d > 0 && best.as_ref().is_none_or(|(bc, bd, _)| rej * bd < bc * d) {
                best = Some((rej, d, idx.clone()));
            }
            let mut v = n;
            loop {
                if v == 0 {
                    return (best, visited);
                }
                v -= 1;
                let new = if idx[v] + 1 < self.symbols[v].len() { idx[v] + 1 } else { 0 };
                for &e in &self.incident[v] {
                    let before = self.rejects(e, &idx);
                    let old = idx[v];
                    idx[v] = new;
                    let after = self.rejects(e, &idx);
                    idx[v] = old;
                    match (before, after) {
                        (false, true) => rej += self.ew[e],
                        (true, false) => rej -= self.ew[e],
                        _ => {}
                    }
                }
                for (t, dd) in self.targets.iter().zip(dis.iter_mut()) {
                    match (idx[v] != t[v], new != t[v]) {
                        (false, true) => *dd += self.vw[v],
                        (true, false) => *dd -= self.vw[v],
                        _ => {}
                    }
                }
                idx[v] = new;
                if new != 0 {
                    break;
                }
            }
        }
    }

    fn sampled(&self, seed: u64, trials: usize) -> Option<(u128, u128, Vec<usize>)> {
        use rand::Rng as _;
        let mut rng = seeded(seed);
        let mut best: Option<(u128, u128, Vec<usize>)> = None;
        for _ in 0..trials {
            let idx: Vec<usize> = self.symbols.iter().map(|s| rng.gen_range(0..s.len())).collect();
            let d = self.dist(&idx);
            if d == 0 {
                continue;
            }
            let r = self.rej(&idx);
            if best.as_ref().is_none_or(|(bc, bd, _)| r * bd < bc * d) {
                best = Some((r, d, idx));
            }
        }
        best
    }
}

/// Options for [`tester_metrics`].
#[derive(Clone, Copy, Debug)]
pub struct TesterOptions {
    pub mode: SubsetMode,
    pub word_space: WordSpace,
    pub budget: u128,
}

impl Default for TesterOptions {
    fn default() -> Self {
        TesterOptions { mode: SubsetMode::Exhaustive, word_space: WordSpace::Product, budget: DEFAULT_WORD_BUDGET }
    }
}

/// Soundness, relative distance and rate of the code's tester.
///
/// Exhaustive mode scans every word within the budget. Past the budget,
/// on the product word space, a basis-line quotient whose code is exactly
/// B⁰ is solved exactly by [`basis_line_cb0`] instead.
pub fn tester_metrics(code: &SheafCode, opts: TesterOptions) -> Result<TesterReport> {
    let scan = WordScan::new(code, opts.word_space)?;
    let words = scan.size();
    let (method, best, visited) = match opts.mode {
        SubsetMode::Sampled { seed, trials } => {
            (SoundnessMethod::Sampled { seed, trials }, scan.sampled(seed, trials), trials as u128)
        }
        SubsetMode::Exhaustive if words <= opts.budget => {
            let (best, visited) = scan.exhaustive();
            (SoundnessMethod::Exhaustive, best, visited)
        }
        SubsetMode::Exhaustive => {
            let structural = match (&code.assignment, opts.word_space) {
                (Some(a), WordSpace::Product) => structural_applies(code, a)?,
                _ => false,
            };
            if !structural {
                budget("tester word enumeration", opts.budget, words)?;
            }
            let r = basis_line_cb0(code.sheaf.complex(), code.assignment.as_ref().expect("checked"))?;
            let best = r.witness.map(|w| {
                let idx: Vec<usize> = code
                    .embed_word(&w)
                    .iter()
                    .enumerate()
                    .map(|(v, sym)| scan.symbols[v].binary_search(sym).expect("witness lies in the product space"))
                    .collect();
                (scan.rej(&idx), scan.dist(&idx), idx)
            });
            (SoundnessMethod::Structural, best, r.nodes as u128)
        }
    };
    let scaled = |q: u128| Rational::new(q.into(), scan.denom.into());
    Ok(TesterReport {
        method,
        word_space: opts.word_space,
        soundness: best
            .as_ref()
            .map_or(Expansion::Unconstrained, |(r, d, _)| Expansion::Finite(Rational::new((*r).into(), (*d).into()))),
        upper_bound_only: matches!(method, SoundnessMethod::Sampled { .. }),
        distance: code.distance(),
        rate: code.rate(),
        code_size: code.len(),
        alphabet_order: code.alphabet.order(),
        witness: best.as_ref().map(|(_, _, idx)| scan.word(idx)),
        witness_rejection: best.as_ref().map(|(r, _, _)| scaled(*r)),
        witness_distance: best.as_ref().map(|(_, d, _)| scaled(*d)),
        words_visited: visited,
    })
}

/// The structural solver computes distance to B⁰, which is the distance to
/// the code exactly when `Z⁰ = B⁰`.
fn structural_applies(code: &SheafCode, a: &SubgroupAssignment) -> Result<bool> {
    if line_directions(code.sheaf.complex(), a).is_err() {
        return Ok(false);
    }
    let summary = cohomology_spaces(&code.sheaf, u128::MAX)?;
    Ok(summary.h0_order == 1u32.into())
}

/// The explicit family from the introduction: `R = F₂^m`, `R_{v_i}` the
/// i-th basis line for `i < m`, everything else zero.
#[derive(Clone, Debug)]
pub struct IntroLtc {
    pub degree: usize,
    pub m: usize,
    pub assignment: SubgroupAssignment,
    pub sheaf: AugmentedSheaf,
    pub code: SheafCode,
    pub conditions: ConditionReport,
    /// The theorem's soundness claim evaluated for this graph.
    pub theorem_claim: TheoremBound,
}

pub fn intro_ltc(x: &WeightedComplex, m: usize, budget_cap: u128) -> Result<IntroLtc> {
    let fail = |msg: String| Err(Error::PreconditionViolated(msg));
    let g = SimpleGraph::from_complex(x)?;
    let n = g.n();
    if m == 0 || m > n {
        return fail(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}"));
    }
    let k = g.degree(0);
    if k == 0 || (0..n as u32).any(|v| g.degree(v) != k) {
        return fail("the graph must be regular of positive degree".into());
    }
    if !x.is_canonical() {
        return fail("the weights must be canonical".into());
    }
    let r = AbelianGroup::gf(2, m)?;
    let vertex = (0..n)
        .map(|i| if i < m { Subgroup::generated(&r, &[r.unit(i)]) } else { Ok(Subgroup::zero(&r)) })
        .collect::<Result<Vec<_>>>()?;
    let assignment = SubgroupAssignment::new(x, &r, vertex, vec![Subgroup::zero(&r); x.edges().len()])?;
    let conditions = check_conditions(x, &assignment, ConditionOptions::default())?;
    let theorem_claim = theorem_bound_for(x, &assignment, budget_cap)?;
    let code = quotient_code(x, &assignment, budget_cap)?;
    Ok(IntroLtc { degree: k, m, sheaf: code.sheaf.clone(), assignment, code, conditions, theorem_claim })
}
