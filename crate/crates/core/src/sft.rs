//! Subshifts of finite type given by a 0/1 transition matrix, admissible
//! words, higher-block recodings and periodic orbits.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cycles;
use crate::{Error, Result};

/// A symbol of the alphabet `{0, .., d-1}`.
pub type Symbol = u32;

/// Exact positive rational in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Ratio> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator"));
        }
        let g = gcd(num, den).max(1);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A finite word over the alphabet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lexicographically least cyclic rotation.
    pub fn least_rotation(&self) -> Word {
        Word(least_rotation(&self.0))
    }

    /// Digits when every symbol is below ten, dot separated otherwise.
    pub fn render(&self, d: usize) -> String {
        let sep = if d > 10 { "." } else { "" };
        let parts: Vec<String> = self.0.iter().map(|s| format!("{s}")).collect();
        parts.join(sep)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().any(|&s| s >= 10);
        for (i, s) in self.0.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub(crate) fn least_rotation(w: &[Symbol]) -> Vec<Symbol> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0usize;
    for start in 1..n {
        for i in 0..n {
            let a = w[(start + i) % n];
            let b = w[(best + i) % n];
            if a != b {
                if a < b {
                    best = start;
                }
                break;
            }
        }
    }
    (0..n).map(|i| w[(best + i) % n]).collect()
}

/// Resource caps that make enumeration fail closed instead of exhausting
/// memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of admissible words of one length.
    pub max_words: usize,
    /// Maximum number of elementary cycles enumerated.
    pub max_cycles: usize,
    /// Maximum number of grid points in a parameter cover.
    pub max_grid: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_words: 1 << 22,
            max_cycles: 1_000_000,
            max_grid: 250_000,
        }
    }
}

/// Shift of finite type `Σ_A` on `d` symbols with the metric parameter θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    succ: Vec<Vec<Symbol>>,
    pred: Vec<Vec<Symbol>>,
    theta: Ratio,
}

impl Sft {
    /// Builds the shift from the rows of a 0/1 matrix.
    pub fn new(d: usize, rows: &[Vec<u8>], theta: Ratio) -> Result<Sft> {
        if d == 0 {
            return Err(Error::BadMatrix("empty alphabet".into()));
        }
        if rows.len() != d {
            return Err(Error::BadMatrix(format!("expected {d} rows, found {}", rows.len())));
        }
        let mut succ = vec![Vec::new(); d];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::BadMatrix(format!(
                    "row {i} has {} entries, expected {d}",
                    row.len()
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                match a {
                    0 => {}
                    1 => succ[i].push(j as Symbol),
                    _ => return Err(Error::BadMatrix(format!("entry ({i},{j}) is {a}"))),
                }
            }
        }
        Sft::from_successors(succ, theta)
    }

    /// Builds the shift from successor lists.
    pub fn from_successors(mut succ: Vec<Vec<Symbol>>, theta: Ratio) -> Result<Sft> {
        let d = succ.len();
        if d == 0 {
            return Err(Error::BadMatrix("empty alphabet".into()));
        }
        if theta.num == 0 || theta.num >= theta.den {
            return Err(Error::BadTheta(theta.value()));
        }
        let mut pred = vec![Vec::new(); d];
        for (i, row) in succ.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            for &j in row.iter() {
                if j as usize >= d {
                    return Err(Error::BadMatrix(format!("symbol {j} out of range")));
                }
                pred[j as usize].push(i as Symbol);
            }
        }
        for i in 0..d {
            if succ[i].is_empty() || pred[i].is_empty() {
                return Err(Error::EmptyLetter(i));
            }
        }
        Ok(Sft { succ, pred, theta })
    }

    /// Full shift on `d` symbols.
    pub fn full_shift(d: usize, theta: Ratio) -> Result<Sft> {
        let succ = (0..d).map(|_| (0..d as Symbol).collect()).collect();
        Sft::from_successors(succ, theta)
    }

    pub fn alphabet_size(&self) -> usize {
        self.succ.len()
    }

    pub fn theta(&self) -> Ratio {
        self.theta
    }

    pub fn allows(&self, i: Symbol, j: Symbol) -> bool {
        self.succ
            .get(i as usize)
            .is_some_and(|r| r.binary_search(&j).is_ok())
    }

    pub fn successors(&self, i: Symbol) -> &[Symbol] {
        &self.succ[i as usize]
    }

    pub fn predecessors(&self, i: Symbol) -> &[Symbol] {
        &self.pred[i as usize]
    }

    pub fn successor_lists(&self) -> &[Vec<Symbol>] {
        &self.succ
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|r| r.len()).sum()
    }

    /// Dense 0/1 rows of the transition matrix.
    pub fn transition_rows(&self) -> Vec<Vec<u8>> {
        let d = self.alphabet_size();
        self.succ
            .iter()
            .map(|r| {
                let mut row = vec![0u8; d];
                for &j in r {
                    row[j as usize] = 1;
                }
                row
            })
            .collect()
    }

    fn reach(&self, adj: &[Vec<Symbol>]) -> Vec<Option<usize>> {
        let d = self.alphabet_size();
        let mut level = vec![None; d];
        level[0] = Some(0);
        let mut queue = alloc::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let lv = level[v].unwrap_or(0);
            for &w in &adj[v] {
                if level[w as usize].is_none() {
                    level[w as usize] = Some(lv + 1);
                    queue.push_back(w as usize);
                }
            }
        }
        level
    }

    /// Whether the transition graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        self.reach(&self.succ).iter().all(Option::is_some)
            && self.reach(&self.pred).iter().all(Option::is_some)
    }

    /// Period of an irreducible matrix (gcd of cycle lengths).
    pub fn period(&self) -> Option<usize> {
        if !self.is_irreducible() {
            return None;
        }
        let level = self.reach(&self.succ);
        let mut g = 0usize;
        for (u, row) in self.succ.iter().enumerate() {
            let lu = level[u]? as i64;
            for &v in row {
                let lv = level[v as usize]? as i64;
                g = gcd(g as u64, (lu + 1 - lv).unsigned_abs()) as usize;
            }
        }
        Some(g)
    }

    /// Irreducible with period one.
    pub fn is_aperiodic(&self) -> bool {
        self.period() == Some(1)
    }

    /// Diameter θ^(k+1) of a cylinder of length `k`.
    pub fn cylinder_diameter(&self, k: usize) -> f64 {
        crate::math::powi(self.theta.value(), k as i32 + 1)
    }

    pub fn is_admissible(&self, w: &[Symbol]) -> bool {
        let d = self.alphabet_size();
        w.iter().all(|&s| (s as usize) < d) && w.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    /// Number of admissible words of length `k`, saturating at `u128::MAX`.
    pub fn count_words(&self, k: usize) -> u128 {
        if k == 0 {
            return 1;
        }
        let d = self.alphabet_size();
        let mut c = vec![1u128; d];
        for _ in 1..k {
            let next: Vec<u128> = (0..d)
                .map(|v| {
                    self.succ[v]
                        .iter()
                        .fold(0u128, |acc, &w| acc.saturating_add(c[w as usize]))
                })
                .collect();
            c = next;
        }
        c.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    /// All admissible words of length `k` in lexicographic order.
    pub fn enumerate_words(&self, k: usize, limits: &Limits) -> Result<WordSet> {
        if k == 0 {
            return Err(Error::InvalidArgument("word length must be positive"));
        }
        let d = self.alphabet_size();
        let required = self.count_words(k);
        if required > limits.max_words as u128 {
            return Err(Error::CapExceeded {
                what: "admissible words",
                required,
                cap: limits.max_words as u128,
            });
        }
        let bits = (usize::BITS - (d - 1).max(1).leading_zeros()) as usize;
        if bits * k > 64 {
            return Err(Error::CapExceeded {
                what: "word code width in bits",
                required: (bits * k) as u128,
                cap: 64,
            });
        }
        let n = required as usize;
        let mut symbols = Vec::with_capacity(n * k);
        let mut codes = Vec::with_capacity(n);
        let mut cur: Vec<Symbol> = Vec::with_capacity(k);
        // stack of (depth, next successor index)
        let mut pos: Vec<usize> = Vec::with_capacity(k);
        for first in 0..d as Symbol {
            cur.clear();
            pos.clear();
            cur.push(first);
            pos.push(0);
            while !cur.is_empty() {
                if cur.len() == k {
                    symbols.extend_from_slice(&cur);
                    codes.push(code_of(d, &cur));
                    cur.pop();
                    pos.pop();
                    continue;
                }
                let last = *cur.last().unwrap_or(&0);
                let p = pos.last_mut().expect("position stack");
                if *p < self.succ[last as usize].len() {
                    let next = self.succ[last as usize][*p];
                    *p += 1;
                    cur.push(next);
                    pos.push(0);
                } else {
                    cur.pop();
                    pos.pop();
                }
            }
        }
        Ok(WordSet { d, k, symbols, codes })
    }

    /// The `k`-block presentation: states are admissible words of length
    /// `k`, with a transition `u -> v` when `u[1..] == v[..k-1]`.
    pub fn recode(&self, k: usize, limits: &Limits) -> Result<RecodedSystem> {
        let words = self.enumerate_words(k, limits)?;
        if k == 1 {
            return Ok(RecodedSystem {
                source: self.clone(),
                k,
                target: self.clone(),
                words,
            });
        }
        let mut succ = Vec::with_capacity(words.len());
        let mut buf = vec![0 as Symbol; k];
        for i in 0..words.len() {
            let w = words.get(i);
            buf[..k - 1].copy_from_slice(&w[1..]);
            let last = w[k - 1];
            let mut row = Vec::with_capacity(self.succ[last as usize].len());
            for &s in &self.succ[last as usize] {
                buf[k - 1] = s;
                let j = words.index_of(&buf).expect("extension of an admissible word");
                row.push(j as Symbol);
            }
            succ.push(row);
        }
        let target = Sft::from_successors(succ, self.theta)?;
        Ok(RecodedSystem {
            source: self.clone(),
            k,
            target,
            words,
        })
    }

    /// Periodic orbits whose period-`k` windows are pairwise distinct: the
    /// elementary circuits of the `k`-block graph, one per orbit, sorted by
    /// period and then by canonical segment.
    pub fn elementary_orbits(&self, k: usize, limits: &Limits) -> Result<Vec<PeriodicOrbit>> {
        let rec = self.recode(k, limits)?;
        let cycles = cycles::simple_cycles(rec.target.successor_lists(), limits.max_cycles)?;
        let mut out: Vec<PeriodicOrbit> = cycles
            .iter()
            .map(|c| {
                let seg: Vec<Symbol> = c.iter().map(|&st| rec.words.get(st as usize)[0]).collect();
                PeriodicOrbit {
                    segment: Word(least_rotation(&seg)),
                }
            })
            .collect();
        out.sort_by(|a, b| {
            a.period()
                .cmp(&b.period())
                .then_with(|| a.segment.cmp(&b.segment))
        });
        out.dedup();
        Ok(out)
    }

    /// Largest shift-invariant subsystem using only the given symbols.
    pub fn max_invariant_subgraph(&self, states: &[Symbol]) -> Option<InvariantSubgraph> {
        let mut states: Vec<Symbol> = states.to_vec();
        states.sort_unstable();
        states.dedup();
        let local = |s: Symbol| states.binary_search(&s).ok();
        let adj: Vec<Vec<u32>> = states
            .iter()
            .map(|&s| {
                self.succ[s as usize]
                    .iter()
                    .filter_map(|&t| local(t).map(|x| x as u32))
                    .collect()
            })
            .collect();
        let keep = cycles::invariant_core(&adj);
        if keep.is_empty() {
            return None;
        }
        let kept: Vec<Symbol> = keep.iter().map(|&i| states[i as usize]).collect();
        let succ: Vec<Vec<Symbol>> = keep
            .iter()
            .map(|&i| {
                adj[i as usize]
                    .iter()
                    .filter_map(|t| keep.binary_search(t).ok().map(|x| x as Symbol))
                    .collect()
            })
            .collect();
        let sft = Sft::from_successors(succ, self.theta).ok()?;
        Some(InvariantSubgraph { sft, states: kept })
    }
}

fn code_of(d: usize, w: &[Symbol]) -> u64 {
    w.iter().fold(0u64, |acc, &s| acc * d as u64 + s as u64)
}

/// Admissible words of a fixed length stored contiguously, in lexicographic
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSet {
    d: usize,
    k: usize,
    symbols: Vec<Symbol>,
    codes: Vec<u64>,
}

impl WordSet {
    pub fn word_len(&self) -> usize {
        self.k
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn get(&self, i: usize) -> &[Symbol] {
        &self.symbols[i * self.k..(i + 1) * self.k]
    }

    /// Position of a word in the set, if admissible.
    pub fn index_of(&self, w: &[Symbol]) -> Option<usize> {
        if w.len() != self.k || w.iter().any(|&s| s as usize >= self.d) {
            return None;
        }
        self.codes.binary_search(&code_of(self.d, w)).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        self.symbols.chunks_exact(self.k)
    }
}

/// A shift together with its `k`-block presentation.
#[derive(Clone, Debug)]
pub struct RecodedSystem {
    pub source: Sft,
    pub k: usize,
    pub target: Sft,
    pub words: WordSet,
}

impl RecodedSystem {
    pub fn word_of_state(&self, i: usize) -> &[Symbol] {
        self.words.get(i)
    }

    pub fn state_of_word(&self, w: &[Symbol]) -> Option<usize> {
        self.words.index_of(w)
    }
}

/// A periodic point `(segment)^∞` of minimal period `segment.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicOrbit {
    segment: Word,
}

impl PeriodicOrbit {
    /// Validates cyclic admissibility and primality of the segment.
    pub fn new(sft: &Sft, segment: Vec<Symbol>) -> Result<PeriodicOrbit> {
        let n = segment.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let w = Word(segment);
        let cyclic_ok = sft.is_admissible(&w.0) && sft.allows(w.0[n - 1], w.0[0]);
        if !cyclic_ok {
            return Err(Error::InadmissibleWord(format!("{w}")));
        }
        for p in 1..n {
            if n % p == 0 && (0..n).all(|i| w.0[i] == w.0[i % p]) {
                return Err(Error::InvalidArgument("segment is not primitive"));
            }
        }
        Ok(PeriodicOrbit { segment: w })
    }

    pub fn period(&self) -> usize {
        self.segment.len()
    }

    pub fn segment(&self) -> &[Symbol] {
        &self.segment.0
    }

    /// The same orbit written from its least rotation.
    pub fn canonical(&self) -> PeriodicOrbit {
        PeriodicOrbit {
            segment: self.segment.least_rotation(),
        }
    }

    /// The word of length `k` starting at position `i` of the orbit.
    pub fn window(&self, i: usize, k: usize) -> Vec<Symbol> {
        let n = self.period();
        (0..k).map(|j| self.segment.0[(i + j) % n]).collect()
    }
}

impl fmt::Display for PeriodicOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf", self.segment)
    }
}

/// Maximal invariant subsystem on a subset of symbols, relabelled
/// `0..states.len()`.
#[derive(Clone, Debug)]
pub struct InvariantSubgraph {
    pub sft: Sft,
    /// Original symbol of each new label.
    pub states: Vec<Symbol>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn half() -> Ratio {
        Ratio::new(1, 2).unwrap()
    }

    fn golden() -> Sft {
        Sft::new(2, &[vec![1, 1], vec![1, 0]], half()).unwrap()
    }

    #[test]
    fn rejects_empty_letters_and_bad_theta() {
        let r = Sft::new(2, &[vec![1, 0], vec![0, 0]], half());
        assert_eq!(r, Err(Error::EmptyLetter(1)));
        let r = Sft::full_shift(2, Ratio::new(1, 1).unwrap());
        assert!(matches!(r, Err(Error::BadTheta(_))));
        assert!(Sft::new(2, &[vec![1, 2], vec![1, 1]], half()).is_err());
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let s = golden();
        let counts: Vec<u128> = (1..=8).map(|k| s.count_words(k)).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13, 21, 34, 55]);
        let ws = s.enumerate_words(3, &Limits::default()).unwrap();
        let listed: Vec<Vec<Symbol>> = ws.iter().map(|w| w.to_vec()).collect();
        assert_eq!(
            listed,
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 1]]
        );
        assert_eq!(ws.index_of(&[1, 0, 0]), Some(3));
        assert_eq!(ws.index_of(&[1, 1, 0]), None);
    }

    #[test]
    fn enumeration_respects_cap() {
        let s = Sft::full_shift(2, half()).unwrap();
        let lim = Limits {
            max_words: 100,
            ..Limits::default()
        };
        assert!(matches!(
            s.enumerate_words(7, &lim),
            Err(Error::CapExceeded { required: 128, .. })
        ));
    }

    #[test]
    fn periods_and_connectivity() {
        let cyc = Sft::new(2, &[vec![0, 1], vec![1, 0]], half()).unwrap();
        assert!(cyc.is_irreducible());
        assert_eq!(cyc.period(), Some(2));
        assert!(!cyc.is_aperiodic());
        assert!(golden().is_aperiodic());
        let split = Sft::new(2, &[vec![1, 0], vec![0, 1]], half()).unwrap();
        assert!(!split.is_irreducible());
    }

    #[test]
    fn recoding_full_two_shift() {
        let s = Sft::full_shift(2, half()).unwrap();
        let r = s.recode(2, &Limits::default()).unwrap();
        assert_eq!(r.target.alphabet_size(), 4);
        assert_eq!(r.target.successors(1), &[2, 3]);
        assert_eq!(r.word_of_state(2), &[1, 0]);
    }

    #[test]
    fn elementary_orbits_of_full_two_shift() {
        let s = Sft::full_shift(2, half()).unwrap();
        let orbits = s.elementary_orbits(2, &Limits::default()).unwrap();
        let segs: Vec<Vec<Symbol>> = orbits.iter().map(|o| o.segment().to_vec()).collect();
        assert_eq!(
            segs,
            vec![
                vec![0],
                vec![1],
                vec![0, 1],
                vec![0, 0, 1],
                vec![0, 1, 1],
                vec![0, 0, 1, 1]
            ]
        );
    }

    #[test]
    fn orbit_validation() {
        let s = golden();
        assert!(PeriodicOrbit::new(&s, vec![0, 1]).is_ok());
        assert!(PeriodicOrbit::new(&s, vec![1, 1]).is_err());
        assert!(PeriodicOrbit::new(&s, vec![0, 1, 0, 1]).is_err());
        let o = PeriodicOrbit::new(&s, vec![1, 0, 0]).unwrap();
        assert_eq!(o.canonical().segment(), &[0, 0, 1]);
        assert_eq!(o.window(2, 4), vec![0, 1, 0, 0]);
    }

    #[test]
    fn invariant_subgraph_prunes_transients() {
        let s = Sft::new(
            3,
            &[vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 1]],
            half(),
        )
        .unwrap();
        let sub = s.max_invariant_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.states, vec![0]);
        assert!(s.max_invariant_subgraph(&[1]).is_none());
    }

    #[test]
    fn word_display() {
        assert_eq!(Word::new(vec![0, 1, 1]).to_string(), "011");
        assert_eq!(Word::new(vec![3, 12]).to_string(), "3.12");
        assert_eq!(Word::new(vec![1, 0, 0]).least_rotation().0, vec![0, 0, 1]);
    }
}
