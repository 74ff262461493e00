//! Ultrapaths and infinite paths.
//!
//! An ultrapath pairs a finite edge word with a nonempty subset of its
//! final range; length-0 ultrapaths are generalized vertices. Infinite
//! paths are either eventually periodic (kept in a canonical minimal form)
//! or aperiodic streams: generator functions carrying an explicit,
//! unverifiable promise of aperiodicity. Operations state which decisions
//! lean on that promise.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::graph::{EdgeId, PathError, PathWord, Ultragraph, VertexId, VertexSet};

/// A pair `(word, range)` with `range` a nonempty subset of the word's
/// final range set; an empty word makes this a generalized vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Ultrapath {
    word: PathWord,
    range: VertexSet,
}

impl Ultrapath {
    pub fn new(g: &Ultragraph, word: PathWord, range: VertexSet) -> Result<Self, PathError> {
        if !g.is_valid_path(&word) {
            return Err(PathError::NotAPath);
        }
        if range.is_empty() {
            return Err(PathError::InvalidInfinite("ultrapath range must be nonempty".into()));
        }
        if let Some(r) = g.path_range(&word) {
            if !range.is_subset(r) {
                return Err(PathError::NotAPath);
            }
        }
        Ok(Ultrapath { word, range })
    }

    /// A length-0 ultrapath: a nonempty generalized vertex.
    pub fn vertex_set(range: VertexSet) -> Result<Self, PathError> {
        if range.is_empty() {
            return Err(PathError::InvalidInfinite("ultrapath range must be nonempty".into()));
        }
        Ok(Ultrapath { word: PathWord::empty(), range })
    }

    /// Embed a nonempty word as the ultrapath `(word, r(word))`.
    pub fn from_word(g: &Ultragraph, word: PathWord) -> Result<Self, PathError> {
        if word.is_empty() || !g.is_valid_path(&word) {
            return Err(PathError::NotAPath);
        }
        let range = g.path_range(&word).unwrap().clone();
        Ok(Ultrapath { word, range })
    }

    pub fn word(&self) -> &PathWord {
        &self.word
    }

    pub fn range(&self) -> &VertexSet {
        &self.range
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Word emptiness; a length-0 ultrapath is a generalized vertex.
    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_vertex_set(&self) -> bool {
        self.word.is_empty()
    }

    /// Source: the word's source vertex set for positive length, the range
    /// itself for length 0.
    pub fn source_set(&self, g: &Ultragraph) -> VertexSet {
        match g.path_source(&self.word) {
            Some(v) => VertexSet::singleton(v),
            None => self.range.clone(),
        }
    }

    /// Extend by one edge emitted from inside the range: `(word.e, r(e))`.
    pub fn extend_edge(&self, g: &Ultragraph, e: EdgeId) -> Option<Ultrapath> {
        if !self.range.contains(g.source(e)) {
            return None;
        }
        let mut word = self.word.clone();
        word.push(e);
        Some(Ultrapath { word, range: g.range(e).clone() })
    }

    /// Restrict the range set; `None` when the intersection is empty.
    pub fn restrict(&self, set: &VertexSet) -> Option<Ultrapath> {
        let range = self.range.intersect(set);
        if range.is_empty() {
            None
        } else {
            Some(Ultrapath { word: self.word.clone(), range })
        }
    }
}

/// The partial product of the ultrapath category: concatenation when the
/// left range meets the right source, intersection for generalized
/// vertices. `None` is the distinguished "undefined" result, not a fault.
pub fn up_product(g: &Ultragraph, x: &Ultrapath, y: &Ultrapath) -> Option<Ultrapath> {
    if y.is_vertex_set() {
        // Covers both the vertex-set/vertex-set intersection case and
        // range restriction of a positive-length x.
        x.restrict(y.range())
    } else {
        let s = g.path_source(y.word()).unwrap();
        if !x.range().contains(s) {
            return None;
        }
        Some(Ultrapath {
            word: x.word().concat(y.word()),
            range: y.range().clone(),
        })
    }
}

/// Shortest word `w` with `cycle = w^k`.
fn primitive_root(cycle: &PathWord) -> PathWord {
    let n = cycle.len();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let root = cycle.prefix(d);
        let repeats = (0..n).all(|i| cycle.get(i) == root.get(i % d));
        if repeats {
            return root;
        }
    }
    unreachable!("d = n always repeats")
}

static STREAM_IDS: AtomicU64 = AtomicU64::new(0);

/// A stateless letter generator promised (not verified) to be aperiodic.
#[derive(Clone)]
pub struct StreamRef {
    id: u64,
    name: String,
    gen: Arc<dyn Fn(usize) -> EdgeId + Send + Sync>,
}

impl StreamRef {
    pub fn new(name: impl Into<String>, gen: Arc<dyn Fn(usize) -> EdgeId + Send + Sync>) -> Self {
        StreamRef {
            id: STREAM_IDS.fetch_add(1, AtomicOrdering::Relaxed),
            name: name.into(),
            gen,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn letter(&self, i: usize) -> EdgeId {
        (self.gen)(i)
    }

    fn same(&self, other: &StreamRef) -> bool {
        self.id == other.id
    }
}

impl fmt::Debug for StreamRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StreamRef({}#{})", self.name, self.id)
    }
}

#[derive(Clone, Debug)]
enum Tail {
    /// Repetition of a nonempty cycle word (primitive in canonical form).
    Cycle(PathWord),
    /// An aperiodic stream read from the given offset.
    Stream(StreamRef, usize),
}

/// An infinite edge path.
///
/// Eventually periodic values are canonicalized at construction: primitive
/// cycle, minimal preperiod. Stream-backed values absorb head letters that
/// coincide with the preceding stream letter, so equality of realized
/// paths is equality of representations (given the aperiodicity promise).
#[derive(Clone, Debug)]
pub struct InfinitePath {
    head: PathWord,
    tail: Tail,
}

impl InfinitePath {
    /// Build `prefix . cycle^infinity`, validating the junctions, and
    /// canonicalize.
    pub fn periodic(g: &Ultragraph, prefix: PathWord, cycle: PathWord) -> Result<Self, PathError> {
        if cycle.is_empty() {
            return Err(PathError::InvalidInfinite("empty cycle".into()));
        }
        let whole = prefix.concat(&cycle).concat(&cycle);
        if !g.is_valid_path(&whole) {
            return Err(PathError::NotAPath);
        }
        Ok(Self::periodic_unchecked(prefix, cycle))
    }

    fn periodic_unchecked(prefix: PathWord, cycle: PathWord) -> Self {
        let mut cycle = primitive_root(&cycle);
        let mut prefix = prefix;
        while let (Some(p), Some(c)) = (prefix.last(), cycle.last()) {
            if p != c {
                break;
            }
            // Absorb: u.x (c'.x)^inf = u (x.c')^inf.
            prefix = prefix.prefix(prefix.len() - 1);
            let mut rotated = vec![c];
            rotated.extend(cycle.iter().take(cycle.len() - 1));
            cycle = PathWord::new(rotated);
        }
        InfinitePath { head: prefix, tail: Tail::Cycle(cycle) }
    }

    /// Wrap an aperiodic stream. Validity of consumed prefixes is checked
    /// lazily via [`InfinitePath::validate_prefix`]; the aperiodicity
    /// promise is recorded, not checked.
    pub fn stream(stream: StreamRef) -> Self {
        InfinitePath { head: PathWord::empty(), tail: Tail::Stream(stream, 0) }
    }

    /// Is this value eventually periodic (as opposed to a promised-aperiodic
    /// stream)?
    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Cycle(_))
    }

    /// Canonical preperiod word (empty for streams).
    pub fn prefix_word(&self) -> &PathWord {
        &self.head
    }

    /// Canonical primitive cycle, when eventually periodic.
    pub fn cycle_word(&self) -> Option<&PathWord> {
        match &self.tail {
            Tail::Cycle(c) => Some(c),
            Tail::Stream(..) => None,
        }
    }

    pub fn stream_ref(&self) -> Option<&StreamRef> {
        match &self.tail {
            Tail::Stream(s, _) => Some(s),
            Tail::Cycle(_) => None,
        }
    }

    /// The i-th letter, 0-based.
    pub fn letter(&self, i: usize) -> EdgeId {
        if let Some(e) = self.head.get(i) {
            return e;
        }
        let j = i - self.head.len();
        match &self.tail {
            Tail::Cycle(c) => c.get(j % c.len()).unwrap(),
            Tail::Stream(s, shift) => s.letter(shift + j),
        }
    }

    /// Source vertex of the path.
    pub fn source(&self, g: &Ultragraph) -> VertexId {
        g.source(self.letter(0))
    }

    /// First `n` letters.
    pub fn tau_le(&self, n: usize) -> PathWord {
        PathWord::new((0..n).map(|i| self.letter(i)).collect())
    }

    /// Drop the first `n` letters.
    pub fn tau_gt(&self, n: usize) -> InfinitePath {
        if n == 0 {
            return self.clone();
        }
        if n < self.head.len() {
            return InfinitePath { head: self.head.suffix_from(n), tail: self.tail.clone() };
        }
        let j = n - self.head.len();
        match &self.tail {
            Tail::Cycle(c) => {
                let r = j % c.len();
                let rotated = PathWord::new(
                    c.iter().skip(r).chain(c.iter().take(r)).collect(),
                );
                InfinitePath { head: PathWord::empty(), tail: Tail::Cycle(rotated) }
            }
            Tail::Stream(s, shift) => {
                InfinitePath { head: PathWord::empty(), tail: Tail::Stream(s.clone(), shift + j) }
            }
        }
    }

    /// Prepend a finite word, validating junctions against the graph.
    pub fn prepend(&self, g: &Ultragraph, word: &PathWord) -> Result<InfinitePath, PathError> {
        if word.is_empty() {
            return Ok(self.clone());
        }
        if !g.is_valid_path(word) {
            return Err(PathError::NotAPath);
        }
        let junction = g.path_range(word).unwrap();
        if !junction.contains(self.source(g)) {
            return Err(PathError::NotAPath);
        }
        let head = word.concat(&self.head);
        Ok(match &self.tail {
            Tail::Cycle(c) => Self::periodic_unchecked(head, c.clone()),
            Tail::Stream(s, shift) => Self::absorb_stream(head, s.clone(), *shift),
        })
    }

    fn absorb_stream(mut head: PathWord, stream: StreamRef, mut shift: usize) -> InfinitePath {
        while shift > 0 {
            match head.last() {
                Some(x) if x == stream.letter(shift - 1) => {
                    head = head.prefix(head.len() - 1);
                    shift -= 1;
                }
                _ => break,
            }
        }
        InfinitePath { head, tail: Tail::Stream(stream, shift) }
    }

    /// Check validity of the first `n` junctions (streams are validated
    /// lazily; periodic paths were validated at construction).
    pub fn validate_prefix(&self, g: &Ultragraph, n: usize) -> Result<(), PathError> {
        for i in 0..n {
            if !g.range(self.letter(i)).contains(g.source(self.letter(i + 1))) {
                return Err(PathError::InvalidInfinite(format!("junction {i} invalid")));
            }
        }
        Ok(())
    }

    pub fn starts_with(&self, word: &PathWord) -> bool {
        word.iter().enumerate().all(|(i, e)| self.letter(i) == e)
    }

    /// Exact equality of realized paths. Comparing two distinct streams is
    /// unsupported; a stream never equals a periodic path (this is exactly
    /// the aperiodicity promise).
    pub fn equals(&self, other: &InfinitePath) -> Result<bool, PathError> {
        match (&self.tail, &other.tail) {
            (Tail::Cycle(_), Tail::Cycle(_)) => {
                Ok(self.head == other.head && self.cycle_word() == other.cycle_word())
            }
            (Tail::Stream(s1, k1), Tail::Stream(s2, k2)) => {
                if !s1.same(s2) {
                    return Err(PathError::UnsupportedComparison);
                }
                Ok(self.head == other.head && k1 == k2)
            }
            _ => Ok(false),
        }
    }

    /// The rotation-least primitive cycle of the eventual tail, the
    /// equality key for tail-equivalence classes of periodic paths.
    pub fn cycle_class(&self) -> Option<PathWord> {
        let c = self.cycle_word()?;
        let n = c.len();
        let mut best: Option<PathWord> = None;
        for r in 0..n {
            let rot = PathWord::new(c.iter().skip(r).chain(c.iter().take(r)).collect());
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
        best
    }

    fn period(&self) -> usize {
        match &self.tail {
            Tail::Cycle(c) => c.len(),
            Tail::Stream(..) => 1,
        }
    }

    /// A deterministic ordering key; stream keys use the creation id, so
    /// they are stable within one process run.
    fn sort_key(&self) -> (u8, &PathWord, Option<&PathWord>, u64, usize) {
        match &self.tail {
            Tail::Cycle(c) => (0, &self.head, Some(c), 0, 0),
            Tail::Stream(s, shift) => (1, &self.head, None, s.id, *shift),
        }
    }
}

impl PartialEq for InfinitePath {
    fn eq(&self, other: &Self) -> bool {
        match (&self.tail, &other.tail) {
            (Tail::Cycle(a), Tail::Cycle(b)) => self.head == other.head && a == b,
            (Tail::Stream(s1, k1), Tail::Stream(s2, k2)) => {
                s1.same(s2) && self.head == other.head && k1 == k2
            }
            _ => false,
        }
    }
}

impl Eq for InfinitePath {}

impl PartialOrd for InfinitePath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InfinitePath {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// `tau_{>m}(p) = tau_{>n}(q)` for some m, n with `m - n = k`.
///
/// Tail equality at one offset implies it at all later offsets, and beyond
/// the heads the predicate is periodic, so a single comparison at a
/// sufficiently deep, period-aligned offset decides the question exactly.
pub fn tails_equal_with_offset(p: &InfinitePath, q: &InfinitePath, k: i64) -> Result<bool, PathError> {
    let lcm = num::integer::lcm(p.period(), q.period());
    let deep = [
        0i64,
        -k,
        q.head.len() as i64,
        p.head.len() as i64 - k,
    ]
    .into_iter()
    .max()
    .unwrap() as usize
        + lcm;
    let n = deep;
    let m = n as i64 + k;
    debug_assert!(m >= 0);
    p.tau_gt(m as usize).equals(&q.tau_gt(n))
}

/// Tail equivalence: some shifts of the two paths agree.
pub fn tail_equivalent(p: &InfinitePath, q: &InfinitePath) -> Result<bool, PathError> {
    match (&p.tail, &q.tail) {
        (Tail::Cycle(_), Tail::Cycle(_)) => Ok(p.cycle_class() == q.cycle_class()),
        (Tail::Stream(s1, _), Tail::Stream(s2, _)) => {
            if s1.same(s2) {
                Ok(true)
            } else {
                Err(PathError::UnsupportedComparison)
            }
        }
        _ => Ok(false),
    }
}

/// `y . gamma` for an ultrapath (or generalized vertex) `y`: defined when
/// the path's source lies in `r(y)`.
pub fn concat_infinite(
    g: &Ultragraph,
    y: &Ultrapath,
    gamma: &InfinitePath,
) -> Option<InfinitePath> {
    if !y.range().contains(gamma.source(g)) {
        return None;
    }
    // The junction just checked is the only one `prepend` could reject.
    Some(gamma.prepend(g, y.word()).expect("junction checked"))
}

/// A word prepended to a shifted base path: realizes `u . tau_{>m}(base)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftedTail {
    word: PathWord,
    shift: usize,
    base: InfinitePath,
}

impl ShiftedTail {
    pub fn new(word: PathWord, shift: usize, base: InfinitePath) -> Self {
        ShiftedTail { word, shift, base }
    }

    pub fn word(&self) -> &PathWord {
        &self.word
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn base(&self) -> &InfinitePath {
        &self.base
    }

    /// Letter of the realized path.
    pub fn letter(&self, i: usize) -> EdgeId {
        match self.word.get(i) {
            Some(e) => e,
            None => self.base.letter(self.shift + (i - self.word.len())),
        }
    }

    pub fn realize(&self) -> InfinitePath {
        let tail = self.base.tau_gt(self.shift);
        // Unvalidated prepend: canonicalization only, the caller guarantees
        // the realized word is a path.
        match &tail.tail {
            Tail::Cycle(c) => InfinitePath::periodic_unchecked(self.word.concat(&tail.head), c.clone()),
            Tail::Stream(s, k) => InfinitePath::absorb_stream(self.word.concat(&tail.head), s.clone(), *k),
        }
    }

    /// The arrow degree this representative carries against its base:
    /// `|word| - shift`.
    pub fn degree(&self) -> i64 {
        self.word.len() as i64 - self.shift as i64
    }

    /// Canonical form: absorb trailing word letters that coincide with the
    /// base letter preceding the shift point (in the periodic zone the
    /// shift may be lifted by one period first, since those tails agree),
    /// and reduce the shift modulo the base period once it passes the
    /// preperiod. Idempotent; two shifted tails over the same base
    /// canonicalize equal iff they realize the same path.
    pub fn canonicalize(mut self) -> ShiftedTail {
        let periodic = match &self.base.tail {
            Tail::Cycle(c) => Some((self.base.head.len(), c.len())),
            Tail::Stream(..) => None,
        };
        loop {
            if let Some((pre, per)) = periodic {
                if self.shift >= pre + per {
                    self.shift = pre + (self.shift - pre) % per;
                }
            }
            let Some(last) = self.word.last() else { break };
            let mut absorbed = false;
            if self.shift >= 1 && self.base.letter(self.shift - 1) == last {
                self.word = self.word.prefix(self.word.len() - 1);
                self.shift -= 1;
                absorbed = true;
            } else if let Some((pre, per)) = periodic {
                // The canonical base has minimal preperiod, so at most one
                // of the two candidate letters matches.
                if self.shift >= pre && self.base.letter(self.shift + per - 1) == last {
                    self.word = self.word.prefix(self.word.len() - 1);
                    self.shift = self.shift + per - 1;
                    absorbed = true;
                }
            }
            if !absorbed {
                break;
            }
        }
        self
    }
}

impl PartialOrd for ShiftedTail {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ShiftedTail {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.word, self.shift, &self.base).cmp(&(&other.word, other.shift, &other.base))
    }
}
