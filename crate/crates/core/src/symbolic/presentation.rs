use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::alphabet::{Alphabet, Symbol, Word};
use crate::{Error, Result};

/// Largest number of states a forbidden-word compilation may create.
const MAX_COMPILED_STATES: usize = 1 << 20;

/// Right-resolving labeled graph presenting a sofic subshift.
///
/// Construction validates that the graph is right-resolving, essential,
/// irreducible and aperiodic, then minimizes it by merging vertices with equal
/// follower sets. The stored presentation is therefore the minimal
/// right-resolving presentation of the subshift, which is synchronizing.
#[derive(Debug, Clone, PartialEq)]
pub struct SoficPresentation {
    alphabet: Alphabet,
    names: Vec<String>,
    /// `next[v][s]` is the target of the edge labeled `s` leaving `v`.
    next: Vec<Vec<Option<u32>>>,
}

impl SoficPresentation {
    /// Builds a presentation from named vertices and `(source, label, target)`
    /// edges given as indices.
    pub fn new(
        alphabet: Alphabet,
        vertex_names: Vec<String>,
        edges: &[(usize, Symbol, usize)],
    ) -> Result<Self> {
        let nv = vertex_names.len();
        if nv == 0 {
            return Err(Error::InvalidPresentation("no vertices".into()));
        }
        let mut seen = HashSet::new();
        for name in &vertex_names {
            if !seen.insert(name) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate vertex {name:?}"
                )));
            }
        }
        let mut next = vec![vec![None; alphabet.len()]; nv];
        for &(src, label, dst) in edges {
            if src >= nv || dst >= nv {
                return Err(Error::InvalidPresentation(format!(
                    "edge ({src}, {label}, {dst}) references a missing vertex"
                )));
            }
            alphabet.validate(&[label])?;
            let slot = &mut next[src][label as usize];
            if let Some(old) = *slot {
                if old as usize != dst {
                    return Err(Error::InvalidPresentation(format!(
                        "not right-resolving: vertex {:?} has two edges labeled {:?}",
                        vertex_names[src],
                        alphabet.name(label)
                    )));
                }
            }
            *slot = Some(dst as u32);
        }
        let p = Self {
            alphabet,
            names: vertex_names,
            next,
        };
        p.check_essential()?;
        p.validated()
    }

    /// Full shift on `size` symbols named `0..size`.
    pub fn full_shift(size: usize) -> Result<Self> {
        let alphabet = Alphabet::numeric(size)?;
        let edges: Vec<_> = (0..size).map(|s| (0, s as Symbol, 0)).collect();
        Self::new(alphabet, vec!["*".into()], &edges)
    }

    /// Binary sequences without the factor `11`.
    pub fn golden_mean() -> Self {
        Self::new(
            Alphabet::binary(),
            vec!["a".into(), "b".into()],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 0)],
        )
        .expect("golden mean presentation is valid")
    }

    /// Binary sequences whose maximal runs of `0` between two `1` have even
    /// length.
    pub fn even_shift() -> Self {
        Self::new(
            Alphabet::binary(),
            vec!["a".into(), "b".into()],
            &[(0, 1, 0), (0, 0, 1), (1, 0, 0)],
        )
        .expect("even shift presentation is valid")
    }

    /// Compiles the subshift of finite type given by a list of forbidden
    /// words into a presentation.
    ///
    /// States are the allowed words of length `L - 1` where `L` is the longest
    /// forbidden word. The graph is pruned to its essential part, which must be
    /// irreducible, and then minimized.
    pub fn from_forbidden(alphabet: Alphabet, forbidden: &[Word]) -> Result<Self> {
        let mut forbidden_set = HashSet::new();
        for w in forbidden {
            if w.is_empty() {
                return Err(Error::InvalidPresentation("empty forbidden word".into()));
            }
            alphabet.validate(w)?;
            forbidden_set.insert(w.clone());
        }
        let longest = forbidden.iter().map(Word::len).max().unwrap_or(1);
        let size = alphabet.len();
        let clean_tail = |w: &[Symbol]| {
            (1..=w.len().min(longest)).all(|k| !forbidden_set.contains(&w[w.len() - k..]))
        };

        // Allowed words of length longest - 1, built level by level so that
        // every prefix is already known to be clean.
        let mut states = vec![Word::empty()];
        for _ in 1..longest {
            let mut grown = Vec::new();
            for w in &states {
                for s in 0..size as Symbol {
                    let c = w.pushed(s);
                    if clean_tail(&c) {
                        grown.push(c);
                    }
                }
            }
            if grown.len() > MAX_COMPILED_STATES {
                return Err(Error::BudgetExceeded {
                    what: "forbidden-word compilation",
                    size: grown.len(),
                    budget: MAX_COMPILED_STATES,
                });
            }
            states = grown;
        }
        let index: HashMap<Word, usize> =
            states.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut next = vec![vec![None; size]; states.len()];
        for (i, w) in states.iter().enumerate() {
            for s in 0..size as Symbol {
                let c = w.pushed(s);
                if clean_tail(&c) {
                    let target = &c[c.len() - (longest - 1)..];
                    next[i][s as usize] = index.get(target).map(|&t| t as u32);
                }
            }
        }
        let names = states
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "*".to_string()
                } else {
                    alphabet.render(w)
                }
            })
            .collect();
        let raw = Self {
            alphabet,
            names,
            next,
        };
        raw.essential_part()?.validated()
    }

    /// Presentation of the beta-shift whose expansion of 1 is eventually
    /// periodic.
    ///
    /// `digits` holds `d_0 ... d_{L-1}` and the last `period` digits repeat
    /// forever. `period = 0` denotes a finite expansion `d_0 ... d_{L-1} 0^∞`,
    /// which is replaced by its quasi-greedy form
    /// `(d_0 ... d_{L-2} (d_{L-1} - 1))^∞`.
    pub fn beta_shift(digits: &[u8], period: usize) -> Result<Self> {
        let (d, k) = quasi_greedy(digits, period)?;
        let len = d.len();
        let top = d[0] as usize;
        let alphabet = Alphabet::numeric(top + 1)?;
        // Lexicographic admissibility of the expansion itself.
        let horizon = 2 * len + 2;
        let seq = |i: usize| {
            if i < len {
                d[i]
            } else {
                d[len - k + (i - len) % k]
            }
        };
        for shift in 1..len {
            for j in 0..horizon {
                let (a, b) = (seq(shift + j), seq(j));
                if a < b {
                    break;
                }
                if a > b {
                    return Err(Error::InvalidPresentation(format!(
                        "expansion is not lexicographically maximal among its shifts (shift {shift})"
                    )));
                }
            }
        }
        let mut next = vec![vec![None; top + 1]; len];
        for (i, row) in next.iter_mut().enumerate() {
            for cell in &mut row[..d[i] as usize] {
                *cell = Some(0);
            }
            let advance = if i + 1 < len { i + 1 } else { len - k };
            row[d[i] as usize] = Some(advance as u32);
        }
        let raw = Self {
            alphabet,
            names: (0..len).map(|i| format!("q{i}")).collect(),
            next,
        };
        raw.essential_part()?.validated()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_vertices(&self) -> usize {
        self.next.len()
    }

    pub fn num_edges(&self) -> usize {
        self.next.iter().flatten().filter(|t| t.is_some()).count()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    /// Target of the edge labeled `s` leaving `v`, if any.
    pub fn step(&self, v: usize, s: Symbol) -> Option<usize> {
        self.next[v][s as usize].map(|t| t as usize)
    }

    /// All edges as `(source, label, target)` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, Symbol, usize)> {
        let mut out = Vec::new();
        for (v, row) in self.next.iter().enumerate() {
            for (s, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    out.push((v, s as Symbol, *t as usize));
                }
            }
        }
        out
    }

    /// The set of all vertices.
    pub fn all_vertices(&self) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.num_vertices());
        set.insert_range(..);
        set
    }

    /// Image of a vertex set after reading one symbol.
    pub fn read(&self, set: &FixedBitSet, s: Symbol) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.num_vertices());
        for v in set.ones() {
            if let Some(t) = self.next[v][s as usize] {
                out.insert(t as usize);
            }
        }
        out
    }

    /// Image of a vertex set after reading a word.
    pub fn read_word(&self, set: &FixedBitSet, word: &[Symbol]) -> FixedBitSet {
        let mut cur = set.clone();
        for &s in word {
            if cur.is_clear() {
                break;
            }
            cur = self.read(&cur, s);
        }
        cur
    }

    /// Whether `word` labels some path in the graph.
    pub fn is_admissible(&self, word: &[Symbol]) -> bool {
        word.iter().all(|&s| (s as usize) < self.alphabet.len())
            && !self.read_word(&self.all_vertices(), word).is_clear()
    }

    /// Unlabeled adjacency as boolean rows.
    pub fn adjacency(&self) -> Vec<FixedBitSet> {
        let n = self.num_vertices();
        self.next
            .iter()
            .map(|row| {
                let mut set = FixedBitSet::with_capacity(n);
                for t in row.iter().flatten() {
                    set.insert(*t as usize);
                }
                set
            })
            .collect()
    }

    /// Smallest `k` with `A^k > 0`. Once reached, every higher power is
    /// positive as well because `A` has no zero rows.
    pub fn primitivity_exponent(&self) -> Result<usize> {
        let n = self.num_vertices();
        let wielandt = (n - 1) * (n - 1) + 1;
        let adj = self.adjacency();
        let mut reach: Vec<FixedBitSet> = adj.clone();
        for k in 1..=wielandt {
            if reach.iter().all(|r| r.count_ones(..) == n) {
                return Ok(k);
            }
            reach = reach
                .iter()
                .map(|r| {
                    let mut out = FixedBitSet::with_capacity(n);
                    for v in r.ones() {
                        out.union_with(&adj[v]);
                    }
                    out
                })
                .collect();
        }
        Err(Error::NotPrimitive {
            checked_up_to: wielandt,
        })
    }

    fn check_essential(&self) -> Result<()> {
        let n = self.num_vertices();
        let mut has_in = vec![false; n];
        for (v, row) in self.next.iter().enumerate() {
            if row.iter().all(Option::is_none) {
                return Err(Error::InvalidPresentation(format!(
                    "vertex {:?} has no outgoing edge",
                    self.names[v]
                )));
            }
            for t in row.iter().flatten() {
                has_in[*t as usize] = true;
            }
        }
        if let Some(v) = has_in.iter().position(|x| !x) {
            return Err(Error::InvalidPresentation(format!(
                "vertex {:?} has no incoming edge",
                self.names[v]
            )));
        }
        Ok(())
    }

    /// Removes vertices without incoming or outgoing edges until none remain.
    fn essential_part(self) -> Result<Self> {
        let n = self.num_vertices();
        let mut alive = vec![true; n];
        loop {
            let mut has_in = vec![false; n];
            let mut changed = false;
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let mut out = false;
                for t in self.next[v].iter().flatten() {
                    if alive[*t as usize] {
                        out = true;
                        has_in[*t as usize] = true;
                    }
                }
                if !out {
                    alive[v] = false;
                    changed = true;
                }
            }
            for v in 0..n {
                if alive[v] && !has_in[v] {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        if keep.is_empty() {
            return Err(Error::InvalidPresentation(
                "the presented subshift is empty".into(),
            ));
        }
        let mut renum = vec![None; n];
        for (i, &v) in keep.iter().enumerate() {
            renum[v] = Some(i as u32);
        }
        let next = keep
            .iter()
            .map(|&v| {
                self.next[v]
                    .iter()
                    .map(|t| t.and_then(|t| renum[t as usize]))
                    .collect()
            })
            .collect();
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        Ok(Self {
            alphabet: self.alphabet,
            names,
            next,
        })
    }

    /// Checks irreducibility and aperiodicity, then minimizes.
    fn validated(self) -> Result<Self> {
        self.check_irreducible()?;
        self.primitivity_exponent()?;
        Ok(self.minimized())
    }

    fn check_irreducible(&self) -> Result<()> {
        let n = self.num_vertices();
        let forward = self.reachable_from(0, false);
        let backward = self.reachable_from(0, true);
        if forward.count_ones(..) != n || backward.count_ones(..) != n {
            return Err(Error::InvalidPresentation(
                "underlying graph is not irreducible".into(),
            ));
        }
        Ok(())
    }

    fn reachable_from(&self, start: usize, reverse: bool) -> FixedBitSet {
        let n = self.num_vertices();
        let mut preds = vec![Vec::new(); n];
        if reverse {
            for (v, _, t) in self.edges() {
                preds[t].push(v);
            }
        }
        let mut seen = FixedBitSet::with_capacity(n);
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            let nbrs: Vec<usize> = if reverse {
                preds[v].clone()
            } else {
                self.next[v].iter().flatten().map(|t| *t as usize).collect()
            };
            for t in nbrs {
                if !seen.put(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Merges vertices with identical follower sets (Moore partition
    /// refinement). Classes are numbered by first appearance so the result is
    /// canonical.
    fn minimized(self) -> Self {
        let n = self.num_vertices();
        let mut class = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut refined = vec![0usize; n];
            for v in 0..n {
                let mut sig = Vec::with_capacity(self.alphabet.len() + 1);
                sig.push(class[v]);
                for t in &self.next[v] {
                    sig.push(t.map_or(usize::MAX, |t| class[t as usize]));
                }
                let fresh = ids.len();
                refined[v] = *ids.entry(sig).or_insert(fresh);
            }
            let new_count = ids.len();
            class = refined;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        if count == n {
            return self;
        }
        let mut rep = vec![usize::MAX; count];
        for v in 0..n {
            if rep[class[v]] == usize::MAX {
                rep[class[v]] = v;
            }
        }
        let next = rep
            .iter()
            .map(|&v| {
                self.next[v]
                    .iter()
                    .map(|t| t.map(|t| class[t as usize] as u32))
                    .collect()
            })
            .collect();
        let names = rep.iter().map(|&v| self.names[v].clone()).collect();
        Self {
            alphabet: self.alphabet,
            names,
            next,
        }
    }
}

/// Normalizes a beta expansion to `(digits, period)` with `period >= 1`.
fn quasi_greedy(digits: &[u8], period: usize) -> Result<(Vec<u8>, usize)> {
    if digits.is_empty() {
        return Err(Error::InvalidPresentation("empty beta expansion".into()));
    }
    if period > digits.len() {
        return Err(Error::InvalidPresentation(format!(
            "period {period} exceeds expansion length {}",
            digits.len()
        )));
    }
    if period > 0 {
        if digits[digits.len() - period..].iter().all(|&d| d == 0) {
            return Err(Error::InvalidPresentation(
                "periodic part is all zeros; give the finite expansion with period 0".into(),
            ));
        }
        if digits[0] == 0 {
            return Err(Error::InvalidPresentation("leading digit must be positive".into()));
        }
        return Ok((digits.to_vec(), period));
    }
    let mut d = digits.to_vec();
    while d.last() == Some(&0) {
        d.pop();
    }
    if d.is_empty() || d[0] == 0 {
        return Err(Error::InvalidPresentation("leading digit must be positive".into()));
    }
    if d == [1] {
        return Err(Error::InvalidPresentation(
            "expansion 1 corresponds to beta = 1".into(),
        ));
    }
    *d.last_mut().expect("nonempty") -= 1;
    let k = d.len();
    Ok((d, k))
}
