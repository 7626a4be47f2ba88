use serde::{Deserialize, Serialize};

use crate::error::{Result, RmtError};

const UNPAIRED: usize = usize::MAX;

/// A perfect matching of `[n]`, stored as an involution without fixed points
/// on `0..n`. Pairs are exposed 1-based, `(i, j)` with `1 <= i < j <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pairing {
    partner: Vec<usize>,
}

impl Pairing {
    /// Build from 1-based pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n % 2 == 1 {
            return Err(RmtError::Parameter(format!("no pairing of an odd set [{n}]")));
        }
        let mut partner = vec![UNPAIRED; n];
        for &(i, j) in pairs {
            if i == 0 || j == 0 || i > n || j > n || i == j {
                return Err(RmtError::Parameter(format!("invalid pair ({i},{j}) on [{n}]")));
            }
            let (a, b) = (i - 1, j - 1);
            if partner[a] != UNPAIRED || partner[b] != UNPAIRED {
                return Err(RmtError::Parameter(format!("element repeated in pair ({i},{j})")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.contains(&UNPAIRED) {
            return Err(RmtError::Parameter("pairs do not cover [n]".into()));
        }
        Ok(Self { partner })
    }

    /// Build from a 0-based fixed-point-free involution.
    pub fn from_involution(partner: Vec<usize>) -> Result<Self> {
        let n = partner.len();
        for (i, &p) in partner.iter().enumerate() {
            if p >= n || p == i || partner[p] != i {
                return Err(RmtError::Parameter("not a fixed-point-free involution".into()));
            }
        }
        Ok(Self { partner })
    }

    pub fn size(&self) -> usize {
        self.partner.len()
    }

    /// 0-based partner of 0-based position `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    pub fn involution(&self) -> &[usize] {
        &self.partner
    }

    /// 1-based pairs ordered by their smaller element.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p)
            .map(|(i, &p)| (i + 1, p + 1))
            .collect()
    }
}

/// Lazy enumeration of all `(n-1)!!` pairings of `[n]`: the smallest unpaired
/// element chooses a partner, in increasing order.
pub struct PairingIter {
    partner: Vec<usize>,
    stack: Vec<(usize, usize)>,
    pending: bool,
}

impl PairingIter {
    fn new(n: usize) -> Self {
        let mut it = Self { partner: vec![UNPAIRED; n], stack: Vec::with_capacity(n / 2), pending: n % 2 == 0 };
        if it.pending {
            it.fill();
        }
        it
    }

    fn fill(&mut self) {
        let n = self.partner.len();
        let mut a = 0;
        while a < n {
            if self.partner[a] != UNPAIRED {
                a += 1;
                continue;
            }
            let b = (a + 1..n).find(|&b| self.partner[b] == UNPAIRED).expect("even count of unpaired elements");
            self.partner[a] = b;
            self.partner[b] = a;
            self.stack.push((a, b));
            a += 1;
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.partner.len();
        while let Some((a, b)) = self.stack.pop() {
            self.partner[a] = UNPAIRED;
            self.partner[b] = UNPAIRED;
            if let Some(next) = (b + 1..n).find(|&c| self.partner[c] == UNPAIRED) {
                self.partner[a] = next;
                self.partner[next] = a;
                self.stack.push((a, next));
                self.fill();
                return true;
            }
        }
        false
    }
}

impl Iterator for PairingIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if !self.pending {
            return None;
        }
        let out = Pairing { partner: self.partner.clone() };
        self.pending = self.advance();
        Some(out)
    }
}

/// All pairings of `[n]`; empty for odd `n`.
pub fn enumerate_pairings(n: usize) -> PairingIter {
    PairingIter::new(n)
}

/// Lazy enumeration of the non-crossing pairings of `[n]` through Dyck words
/// in lexicographic order (opener before closer).
pub struct NcPairingIter {
    word: Vec<bool>,
    pending: bool,
}

impl NcPairingIter {
    fn new(n: usize) -> Self {
        let half = n / 2;
        let word = (0..n).map(|i| i < half).collect();
        Self { word, pending: n % 2 == 0 }
    }

    fn advance(&mut self) -> bool {
        let n = self.word.len();
        let half = n / 2;
        let mut balance_before = vec![0i64; n];
        let mut bal = 0i64;
        for (i, &open) in self.word.iter().enumerate() {
            balance_before[i] = bal;
            bal += if open { 1 } else { -1 };
        }
        for i in (0..n).rev() {
            if self.word[i] && balance_before[i] >= 1 {
                self.word[i] = false;
                let opens_used = self.word[..=i].iter().filter(|&&o| o).count();
                let opens_left = half - opens_used;
                for (k, slot) in self.word[i + 1..].iter_mut().enumerate() {
                    *slot = k < opens_left;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Pairing {
        let mut partner = vec![UNPAIRED; self.word.len()];
        let mut stack = Vec::new();
        for (i, &open) in self.word.iter().enumerate() {
            if open {
                stack.push(i);
            } else {
                let j = stack.pop().expect("Dyck word is balanced");
                partner[i] = j;
                partner[j] = i;
            }
        }
        Pairing { partner }
    }
}

impl Iterator for NcPairingIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if !self.pending {
            return None;
        }
        let out = self.current();
        self.pending = self.advance();
        Some(out)
    }
}

/// All non-crossing pairings of `[n]`; empty for odd `n`.
pub fn enumerate_nc_pairings(n: usize) -> NcPairingIter {
    NcPairingIter::new(n)
}

/// Crossing test by scanning for pairs `(a, c)`, `(b, d)` with `a < b < c < d`.
pub fn is_noncrossing_by_quadruples(p: &Pairing) -> bool {
    let pairs: Vec<(usize, usize)> =
        p.partner.iter().enumerate().filter(|&(i, &q)| i < q).map(|(i, &q)| (i, q)).collect();
    for &(a, c) in &pairs {
        for &(b, d) in &pairs {
            if a < b && b < c && c < d {
                return false;
            }
        }
    }
    true
}

/// Crossing test by repeatedly removing pairs of cyclic neighbours; the first
/// and last remaining elements count as neighbours.
pub fn is_noncrossing_by_reduction(p: &Pairing) -> bool {
    let mut alive: Vec<usize> = (0..p.size()).collect();
    while !alive.is_empty() {
        let len = alive.len();
        let hit = (0..len).find(|&i| p.partner[alive[i]] == alive[(i + 1) % len]);
        match hit {
            Some(i) => {
                let j = (i + 1) % len;
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                alive.remove(hi);
                alive.remove(lo);
            }
            None => return false,
        }
    }
    true
}

/// Non-crossing test (quadruple scan).
pub fn is_noncrossing(p: &Pairing) -> bool {
    is_noncrossing_by_quadruples(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusInfo {
    /// Number of cycles of `gamma . pi` with `gamma = (1, 2, ..., m)`.
    pub cycles: usize,
    pub genus: usize,
}

/// Cycle count of `gamma . pi` and the genus `(m/2 + 1 - #(gamma pi)) / 2`.
pub fn genus(p: &Pairing) -> GenusInfo {
    let m = p.size();
    if m == 0 {
        return GenusInfo { cycles: 0, genus: 0 };
    }
    let mut seen = vec![false; m];
    let mut cycles = 0;
    for start in 0..m {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = (p.partner[i] + 1) % m;
        }
    }
    let twice_genus = m / 2 + 1 - cycles;
    debug_assert!(twice_genus % 2 == 0);
    GenusInfo { cycles, genus: twice_genus / 2 }
}
