use alloc::vec;
use alloc::vec::Vec;
use alloc::collections::VecDeque;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupPresentation};
use crate::error::{Error, Result};

/// Default cap on parabolic powers in the relative metric.
pub const DEFAULT_K_MAX: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordLength {
    Exact(u32),
    /// Longer than the stated bound.
    Exceeds(u32),
}

impl WordLength {
    pub fn exact(self) -> Option<u32> {
        match self {
            WordLength::Exact(n) => Some(n),
            WordLength::Exceeds(_) => None,
        }
    }
}

/// Breadth-first enumeration of the word-metric ball B(R).
///
/// Elements are stored in BFS order, so the sphere of radius r is a
/// contiguous slice. Each element keeps a parent pointer that spells out a
/// shortest word.
#[derive(Debug, Clone)]
pub struct MetricBall<E> {
    pub radius: u32,
    elements: Vec<E>,
    lengths: Vec<u32>,
    parent: Vec<(u32, u32)>,
    index: HashMap<E, u32>,
    sphere_start: Vec<usize>,
    generators: Vec<E>,
}

impl<E: GroupElement> MetricBall<E> {
    /// Enumerates B(radius), failing once more than `budget` elements appear.
    pub fn enumerate(pres: &GroupPresentation<E>, radius: u32, budget: usize) -> Result<MetricBall<E>> {
        let id = E::identity();
        let mut ball = MetricBall {
            radius,
            elements: vec![id.clone()],
            lengths: vec![0],
            parent: vec![(u32::MAX, u32::MAX)],
            index: HashMap::new(),
            sphere_start: vec![0, 1],
            generators: pres.generators.clone(),
        };
        ball.index.insert(id, 0);
        for r in 1..=radius {
            let (lo, hi) = (ball.sphere_start[r as usize - 1], ball.sphere_start[r as usize]);
            for i in lo..hi {
                for (gi, g) in pres.generators.iter().enumerate() {
                    let h = ball.elements[i].compose(g);
                    if ball.index.contains_key(&h) {
                        continue;
                    }
                    let k = ball.elements.len() as u32;
                    ball.index.insert(h.clone(), k);
                    ball.elements.push(h);
                    ball.lengths.push(r);
                    ball.parent.push((i as u32, gi as u32));
                }
                if ball.elements.len() > budget {
                    // ratio of the last two complete spheres
                    let before = if r >= 2 { lo - ball.sphere_start[r as usize - 2] } else { 1 };
                    let growth = (hi - lo) as f64 / before as f64;
                    return Err(Error::Budget { radius: r, budget, growth });
                }
            }
            ball.sphere_start.push(ball.elements.len());
        }
        Ok(ball)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    /// Elements of word length exactly `r`.
    pub fn sphere(&self, r: u32) -> &[E] {
        if r > self.radius {
            return &[];
        }
        &self.elements[self.sphere_start[r as usize]..self.sphere_start[r as usize + 1]]
    }

    /// Number of elements of length ≤ r, for r = 0..=radius.
    pub fn sizes(&self) -> Vec<usize> {
        self.sphere_start[1..].to_vec()
    }

    pub fn index_of(&self, g: &E) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn word_length(&self, g: &E) -> WordLength {
        match self.index.get(g) {
            Some(&i) => WordLength::Exact(self.lengths[i as usize]),
            None => WordLength::Exceeds(self.radius),
        }
    }

    /// Exact word length up to twice the radius.
    ///
    /// A geodesic word of length n ∈ (R, 2R] passes through the sphere S(R),
    /// so `min_{h ∈ S(R)} R + |h⁻¹g|` is exact there.
    pub fn word_length_extended(&self, g: &E) -> WordLength {
        if let Some(&i) = self.index.get(g) {
            return WordLength::Exact(self.lengths[i as usize]);
        }
        let mut best: Option<u32> = None;
        for h in self.sphere(self.radius) {
            if let Some(&j) = self.index.get(&h.inverse().compose(g)) {
                let n = self.radius + self.lengths[j as usize];
                best = Some(best.map_or(n, |b| b.min(n)));
            }
        }
        match best {
            Some(n) => WordLength::Exact(n),
            None => WordLength::Exceeds(2 * self.radius),
        }
    }

    /// A shortest word for the element at `idx`, as generator indices.
    pub fn witness(&self, idx: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.lengths[idx] as usize);
        let mut i = idx;
        while self.parent[i].0 != u32::MAX {
            w.push(self.parent[i].1 as usize);
            i = self.parent[i].0 as usize;
        }
        w.reverse();
        w
    }

    /// Relative lengths of every ball element.
    ///
    /// The search moves by non-parabolic generators at cost 1 and jumps
    /// along each parabolic coset `h·p^k`, `1 ≤ k ≤ min(k_max, 2R + 2)`, at
    /// cost 1, staying inside the ball. The search is repeated with both
    /// caps doubled; any change marks the result as possibly overestimated.
    pub fn relative(&self, pres: &GroupPresentation<E>, k_max: u64) -> RelativeBall {
        let reach = 2 * self.radius as u64 + 2;
        let cap = k_max.min(reach);
        let first = self.relative_search(pres, cap);
        let second = self.relative_search(pres, (2 * k_max).min(2 * reach));
        let possibly_overestimated = first != second;
        RelativeBall { rel: first, k_max, possibly_overestimated }
    }

    fn relative_search(&self, pres: &GroupPresentation<E>, cap: u64) -> Vec<u32> {
        let n = self.elements.len();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        dist[0] = 0;
        queue.push_back(0usize);
        while let Some(i) = queue.pop_front() {
            let dn = dist[i] + 1;
            let h = &self.elements[i];
            for (gi, g) in pres.generators.iter().enumerate() {
                if pres.parabolic[gi] {
                    let mut x = h.clone();
                    for _ in 0..cap {
                        x = x.compose(g);
                        if let Some(&j) = self.index.get(&x) {
                            if dist[j as usize] == u32::MAX {
                                dist[j as usize] = dn;
                                queue.push_back(j as usize);
                            }
                        }
                    }
                } else if let Some(&j) = self.index.get(&h.compose(g)) {
                    if dist[j as usize] == u32::MAX {
                        dist[j as usize] = dn;
                        queue.push_back(j as usize);
                    }
                }
            }
        }
        dist
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelLength {
    /// `None` when the element lies outside the ball.
    pub value: Option<u32>,
    pub possibly_overestimated: bool,
}

/// Relative lengths indexed like the elements of a [`MetricBall`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeBall {
    pub rel: Vec<u32>,
    pub k_max: u64,
    pub possibly_overestimated: bool,
}

impl RelativeBall {
    pub fn rel_length<E: GroupElement>(&self, ball: &MetricBall<E>, g: &E) -> RelLength {
        RelLength {
            value: ball.index_of(g).map(|i| self.rel[i]),
            possibly_overestimated: self.possibly_overestimated,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Mat2;

    #[test]
    fn small_modular_balls() {
        let p = GroupPresentation::modular();
        let b0 = MetricBall::enumerate(&p, 0, 10).unwrap();
        assert_eq!(b0.len(), 1);
        let b = MetricBall::enumerate(&p, 12, 1 << 20).unwrap();
        assert_eq!(b.sizes(), [1, 4, 10, 20, 36, 62, 104, 172, 282, 460, 748, 1214, 1968]);
        let t3 = Mat2::new(1, 3, 0, 1);
        assert_eq!(b.word_length(&t3), WordLength::Exact(3));
        for g in &p.generators {
            assert_eq!(b.word_length(g), WordLength::Exact(1));
        }
    }

    #[test]
    fn budget_error_reports_growth() {
        let p = GroupPresentation::modular();
        match MetricBall::enumerate(&p, 30, 5000) {
            Err(Error::Budget { growth, .. }) => assert!(growth > 1.3 && growth < 2.0, "{growth}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_words_evaluate_back() {
        let p = GroupPresentation::modular();
        let b = MetricBall::enumerate(&p, 8, 1 << 20).unwrap();
        for (i, g) in b.elements().iter().enumerate() {
            let w = b.witness(i);
            assert_eq!(w.len() as u32, b.lengths()[i]);
            assert_eq!(&p.evaluate(&w), g);
        }
    }

    #[test]
    fn extended_length_matches_larger_ball() {
        let p = GroupPresentation::modular();
        let small = MetricBall::enumerate(&p, 6, 1 << 20).unwrap();
        let big = MetricBall::enumerate(&p, 12, 1 << 20).unwrap();
        for (i, g) in big.elements().iter().enumerate() {
            assert_eq!(small.word_length_extended(g), WordLength::Exact(big.lengths()[i]));
        }
    }

    #[test]
    fn relative_examples() {
        let p = GroupPresentation::modular();
        let b = MetricBall::enumerate(&p, 10, 1 << 20).unwrap();
        let r = b.relative(&p, DEFAULT_K_MAX);
        assert!(!r.possibly_overestimated);
        assert_eq!(r.rel_length(&b, &Mat2::identity()).value, Some(0));
        for k in 1..=10 {
            assert_eq!(r.rel_length(&b, &Mat2::new(1, k, 0, 1)).value, Some(1));
        }
        for (i, &l) in b.lengths().iter().enumerate() {
            assert!(r.rel[i] <= l);
        }
    }
}
