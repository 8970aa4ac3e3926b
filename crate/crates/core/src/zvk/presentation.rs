use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::MonodromyRep;
use crate::braid::{artin_images, FreeWord};

/// Finitely presented group. Letters of relators are signed 1-based
/// generator indices.
#[derive(Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl Presentation {
    /// Presentation on generators `g1..gn`.
    pub fn new(n: usize, relators: Vec<FreeWord>) -> Self {
        Presentation { generators: (1..=n).map(|k| format!("g{}", k)).collect(), relators }
    }

    pub fn free(n: usize) -> Self {
        Presentation::new(n, Vec::new())
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(FreeWord::len).sum()
    }

    fn fmt_word(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|&l| {
                let name = &self.generators[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{}^-1", name)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Machine-readable form: names plus relators as signed index lists.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "generators": self.generators,
            "relators": self.relators.iter().map(|r| r.letters().to_vec()).collect::<Vec<_>>(),
            "text": self.to_string(),
        })
    }

    /// Whether the group is visibly cyclic of infinite order: one
    /// generator, no relators.
    pub fn is_infinite_cyclic(&self) -> bool {
        self.generators.len() == 1 && self.relators.is_empty()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.fmt_word(r)).collect();
        if rels.is_empty() {
            write!(f, "< {} >", self.generators.join(", "))
        } else {
            write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
        }
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation{}", self)
    }
}

/// Representative of a relator up to cyclic permutation and inversion.
pub fn canonical_relator(w: &FreeWord) -> Vec<i32> {
    let c = w.cyclic_reduce();
    let inv = c.inverse();
    let mut best: Option<Vec<i32>> = None;
    for word in [c.letters(), inv.letters()] {
        for k in 0..word.len().max(1) {
            let mut rot = word[k.min(word.len())..].to_vec();
            rot.extend_from_slice(&word[..k.min(word.len())]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn push_relator(out: &mut Vec<FreeWord>, seen: &mut HashSet<Vec<i32>>, w: FreeWord) {
    let w = w.cyclic_reduce();
    if w.is_empty() {
        return;
    }
    if seen.insert(canonical_relator(&w)) {
        out.push(w);
    }
}

/// `< g_1..g_n | g_i^-1 rho(gamma_k)(g_i) >`, trivial and repeated relators
/// dropped.
pub fn zvk_presentation(rep: &MonodromyRep) -> Presentation {
    let n = rep.strands;
    let mut rels = Vec::new();
    let mut seen = HashSet::new();
    for b in &rep.braids {
        for (i, img) in artin_images(b).into_iter().enumerate() {
            let gi = FreeWord::generator(n, i + 1);
            push_relator(&mut rels, &mut seen, gi.inverse().mul(&img));
        }
    }
    Presentation::new(n, rels)
}

/// Semidirect product presentation: generators `gamma1..gammas` then
/// `g1..gn`, relators `gamma_k^-1 g_i gamma_k rho(gamma_k)(g_i)^-1`.
pub fn zvk_total_space_presentation(rep: &MonodromyRep) -> Presentation {
    let n = rep.strands;
    let s = rep.braids.len();
    let rank = s + n;
    let shift = |w: &FreeWord| -> FreeWord {
        FreeWord::new(rank, w.letters().iter().map(|&l| l.signum() * (l.abs() + s as i32)).collect()).unwrap()
    };
    let mut rels = Vec::new();
    for (k, b) in rep.braids.iter().enumerate() {
        let gk = FreeWord::generator(rank, k + 1);
        for (i, img) in artin_images(b).into_iter().enumerate() {
            let gi = FreeWord::generator(rank, s + i + 1);
            rels.push(gk.inverse().mul(&gi).mul(&gk).mul(&shift(&img).inverse()));
        }
    }
    let mut generators: Vec<String> = (1..=s).map(|k| format!("gamma{}", k)).collect();
    generators.extend((1..=n).map(|i| format!("g{}", i)));
    Presentation { generators, relators: rels }
}

/// Quotient by the normal closure of the listed generators (1-based): they
/// are deleted from every relator and the rest renumbered.
pub fn quotient_by_generators(p: &Presentation, kill: &[usize]) -> Presentation {
    let keep: Vec<usize> = (1..=p.num_generators()).filter(|k| !kill.contains(k)).collect();
    let mut new_index = vec![0i32; p.num_generators() + 1];
    for (j, &k) in keep.iter().enumerate() {
        new_index[k] = j as i32 + 1;
    }
    let rank = keep.len();
    let mut rels = Vec::new();
    let mut seen = HashSet::new();
    for r in &p.relators {
        let letters: Vec<i32> = r
            .letters()
            .iter()
            .filter(|l| new_index[l.unsigned_abs() as usize] != 0)
            .map(|&l| l.signum() * new_index[l.unsigned_abs() as usize])
            .collect();
        push_relator(&mut rels, &mut seen, FreeWord::new(rank, letters).unwrap());
    }
    Presentation { generators: keep.iter().map(|&k| p.generators[k - 1].clone()).collect(), relators: rels }
}

/// Free rank and nontrivial invariant factors of the abelianization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = std::iter::repeat_n("Z".to_string(), self.rank).collect();
        parts.extend(self.torsion.iter().map(|t| format!("Z/{}", t)));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix.
pub fn smith_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut piv = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && piv.is_none_or(|(a, b): (usize, usize)| m[i][j].abs() < m[a][b].abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut changed = false;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    changed = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        m[i][j] -= q * m[i][t];
                    }
                }
                if m[t][j] != 0 {
                    changed = true;
                }
            }
            if !changed {
                // the pivot must divide every remaining entry
                let bad = (t + 1..rows).find_map(|i| (t + 1..cols).find(|&j| m[i][j] % p != 0).map(|j| (i, j)));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.1 == t {
                m.swap(t, best.0);
            } else {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Smith normal form of the relator exponent-sum matrix.
pub fn abelianize(p: &Presentation) -> Abelianization {
    let n = p.num_generators();
    let m: Vec<Vec<i128>> = p
        .relators
        .iter()
        .map(|r| r.clone().with_rank(n).exponent_sums().into_iter().map(i128::from).collect())
        .collect();
    let diag = smith_diagonal(m);
    let nonzero: Vec<i128> = diag.into_iter().filter(|&d| d != 0).collect();
    Abelianization {
        rank: n - nonzero.len(),
        torsion: nonzero.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect(),
    }
}

/// Whether a relator is, up to cyclic permutation, `u v u^-1 v^-1` for
/// nonempty words `u`, `v`.
pub fn is_commutator(w: &FreeWord) -> bool {
    let c = w.cyclic_reduce();
    let l = c.letters();
    let n = l.len();
    if n < 4 || n % 2 != 0 {
        return false;
    }
    for k in 0..n {
        let rot: Vec<i32> = l[k..].iter().chain(&l[..k]).copied().collect();
        for a in 1..n / 2 {
            let b = n / 2 - a;
            let u = &rot[..a];
            let v = &rot[a..a + b];
            let ui = &rot[a + b..2 * a + b];
            let vi = &rot[2 * a + b..];
            let inv = |x: &[i32]| -> Vec<i32> { x.iter().rev().map(|q| -q).collect() };
            if ui == inv(u).as_slice() && vi == inv(v).as_slice() {
                return true;
            }
        }
    }
    false
}

fn substitute_generator(p: &Presentation, x: usize, image: &FreeWord) -> Presentation {
    let n = p.num_generators();
    let mut images: Vec<FreeWord> = (1..=n).map(|k| FreeWord::generator(n, k)).collect();
    images[x - 1] = image.clone();
    let rels = p.relators.iter().map(|r| r.substitute(&images)).collect();
    let sub = Presentation { generators: p.generators.clone(), relators: rels };
    quotient_by_generators(&sub, &[x])
}

/// Find a relator in which some generator occurs exactly once and use it to
/// eliminate that generator; prefers the shortest such relator.
fn eliminate_once(p: &Presentation) -> Option<Presentation> {
    let mut best: Option<(usize, usize, usize)> = None; // (len, relator, generator)
    for (ri, r) in p.relators.iter().enumerate() {
        for g in 1..=p.num_generators() {
            let count = r.letters().iter().filter(|l| l.unsigned_abs() as usize == g).count();
            if count == 1 && best.is_none_or(|b| r.len() < b.0) {
                best = Some((r.len(), ri, g));
            }
        }
    }
    let (_, ri, g) = best?;
    let r = &p.relators[ri];
    let l = r.letters();
    let k = l.iter().position(|x| x.unsigned_abs() as usize == g).unwrap();
    // rotate so the letter is first: x^e * w = 1
    let w: Vec<i32> = l[k + 1..].iter().chain(&l[..k]).copied().collect();
    let w = FreeWord::new(p.num_generators(), w).unwrap();
    let image = if l[k] > 0 { w.inverse() } else { w };
    let mut rest = p.clone();
    rest.relators.remove(ri);
    Some(substitute_generator(&rest, g, &image))
}

fn rotations(w: &FreeWord) -> Vec<Vec<i32>> {
    let l = w.letters();
    (0..l.len()).map(|k| l[k..].iter().chain(&l[..k]).copied().collect()).collect()
}

/// Replace in `s` a cyclic subword equal to more than half of a cyclic
/// conjugate of `r` (or `r^-1`) by the inverse of the remainder.
fn shorten_with(r: &FreeWord, s: &FreeWord) -> Option<FreeWord> {
    let n = r.len();
    if n == 0 || s.len() < n / 2 + 1 {
        return None;
    }
    let mut pieces = rotations(r);
    pieces.extend(rotations(&r.inverse()));
    for big in (n / 2 + 1..=n).rev() {
        for rot in &pieces {
            let (piece, rest) = rot.split_at(big);
            for srot in rotations(s) {
                if srot.len() >= big && &srot[..big] == piece {
                    let mut letters: Vec<i32> = rest.iter().rev().map(|x| -x).collect();
                    letters.extend_from_slice(&srot[big..]);
                    let w = FreeWord::new(s.rank(), letters).unwrap().cyclic_reduce();
                    if w.len() < s.len() {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn normalize(p: &Presentation) -> Presentation {
    let mut rels = Vec::new();
    let mut seen = HashSet::new();
    let mut sorted = p.relators.clone();
    sorted.sort_by_key(FreeWord::len);
    for r in sorted {
        push_relator(&mut rels, &mut seen, r);
    }
    Presentation { generators: p.generators.clone(), relators: rels }
}

fn score(p: &Presentation) -> (usize, usize) {
    (p.num_generators(), p.total_length())
}

/// Eliminations and subword shortenings until neither applies.
fn settle(p: Presentation) -> Presentation {
    let mut cur = normalize(&p);
    loop {
        if let Some(next) = eliminate_once(&cur) {
            cur = normalize(&next);
            continue;
        }
        let mut changed = false;
        'outer: for i in 0..cur.relators.len() {
            for j in 0..cur.relators.len() {
                if i == j || cur.relators[i].len() > cur.relators[j].len() {
                    continue;
                }
                if let Some(w) = shorten_with(&cur.relators[i], &cur.relators[j]) {
                    cur.relators[j] = w;
                    cur = normalize(&cur);
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Substitutions `x -> x*y^e` and `x -> y^e*x`, automorphisms of the free
/// group on the generators.
fn nielsen_moves(n: usize) -> Vec<(usize, FreeWord)> {
    let mut out = Vec::new();
    for x in 1..=n {
        for y in 1..=n {
            if x == y {
                continue;
            }
            for e in [1i32, -1] {
                let (xi, ye) = (x as i32, e * y as i32);
                out.push((x, FreeWord::new(n, vec![xi, ye]).unwrap()));
                out.push((x, FreeWord::new(n, vec![ye, xi]).unwrap()));
            }
        }
    }
    out
}

fn apply_move(p: &Presentation, x: usize, image: &FreeWord) -> Presentation {
    let n = p.num_generators();
    let mut images: Vec<FreeWord> = (1..=n).map(|k| FreeWord::generator(n, k)).collect();
    images[x - 1] = image.clone();
    Presentation {
        generators: p.generators.clone(),
        relators: p.relators.iter().map(|r| r.substitute(&images).cyclic_reduce()).collect(),
    }
}

/// Depth-limited search for a sequence of Nielsen moves after which the
/// settled presentation has fewer generators or a shorter total length.
fn search(p: &Presentation, depth: usize, target: (usize, usize)) -> Option<Presentation> {
    let moves = nielsen_moves(p.num_generators());
    let mut best: Option<Presentation> = None;
    for (x, img) in &moves {
        let q = apply_move(p, *x, img);
        let settled = settle(q.clone());
        if score(&settled) < best.as_ref().map_or(target, score) {
            best = Some(settled);
        }
    }
    if best.is_some() || depth <= 1 {
        return best;
    }
    for (x, img) in &moves {
        let q = apply_move(p, *x, img);
        // do not wander far from the current length
        if q.total_length() > target.1 + 4 {
            continue;
        }
        if let Some(r) = search(&q, depth - 1, target) {
            if score(&r) < best.as_ref().map_or(target, score) {
                best = Some(r);
            }
        }
    }
    best
}

/// Bounded greedy Tietze simplification: generator elimination, subword
/// shortening and short sequences of Nielsen moves, at most `budget` passes.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    let mut cur = settle(p.clone());
    for _ in 0..budget {
        if cur.relators.is_empty() || cur.num_generators() <= 1 {
            break;
        }
        let n = cur.num_generators();
        let depth = match n {
            0..=3 => 3,
            4..=5 => 2,
            _ => 1,
        };
        match search(&cur, depth, score(&cur)) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}
