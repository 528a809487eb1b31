//! Finitely generated Fuchsian groups: elements, presentations, word and
//! relative metric balls, nearest lattice points and horoball families.

mod ball;
mod element;
mod horoballs;
mod lattice;

pub use ball::{MetricBall, RelLength, RelativeBall, WordLength, DEFAULT_K_MAX};
pub use element::{FloatElement, GroupElement, Mat2, Scalar};
pub use horoballs::{
    excursion_trace, geodesic_through, projected_path_length, ExcursionRecord, FordFamily, HoroballFamily, HoroballId,
    HoroballList,
};
pub use lattice::{modular_nearest, nearest_lattice_point, ModularLocator};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Basepoint used for PSL(2,ℤ): outside every Ford circle and not fixed by
/// any nontrivial element.
pub const MODULAR_BASEPOINT: C64 = C64 { re: 0.4, im: 0.9 };

/// A symmetric generating set with parabolic markers and a basepoint.
#[derive(Debug, Clone)]
pub struct GroupPresentation<E> {
    pub generators: Vec<E>,
    pub names: Vec<String>,
    /// `inverse_of[i]` is the index of the inverse of generator `i`.
    pub inverse_of: Vec<usize>,
    pub parabolic: Vec<bool>,
    pub basepoint: C64,
}

impl<E: GroupElement> GroupPresentation<E> {
    /// Builds a presentation, appending missing inverses.
    ///
    /// Each entry is (name, element, marked parabolic).
    pub fn new(gens: Vec<(String, E, bool)>, basepoint: C64) -> Result<GroupPresentation<E>> {
        if !(basepoint.im > 0.0) {
            return Err(Error::Presentation(String::from("basepoint must lie in the upper half-plane")));
        }
        let mut p = GroupPresentation {
            generators: Vec::new(),
            names: Vec::new(),
            inverse_of: Vec::new(),
            parabolic: Vec::new(),
            basepoint,
        };
        for (name, g, par) in gens {
            if g == E::identity() {
                return Err(Error::Presentation(format!("generator {name} is the identity")));
            }
            if par && !g.is_parabolic() {
                return Err(Error::Presentation(format!("generator {name} is marked parabolic but |trace| ≠ 2")));
            }
            if p.generators.contains(&g) {
                continue;
            }
            p.push(name, g, par);
        }
        if p.generators.is_empty() {
            return Err(Error::Presentation(String::from("no generators")));
        }
        let n = p.generators.len();
        for i in 0..n {
            let inv = p.generators[i].inverse();
            match p.generators.iter().position(|g| *g == inv) {
                Some(j) => {
                    if p.parabolic[i] != p.parabolic[j] {
                        return Err(Error::Presentation(format!(
                            "{} and its inverse {} disagree on the parabolic marker",
                            p.names[i], p.names[j]
                        )));
                    }
                    p.inverse_of[i] = j;
                }
                None => {
                    let name = format!("{}^-1", p.names[i]);
                    let par = p.parabolic[i];
                    p.push(name, inv, par);
                    let j = p.generators.len() - 1;
                    p.inverse_of[i] = j;
                    p.inverse_of[j] = i;
                }
            }
        }
        Ok(p)
    }

    fn push(&mut self, name: String, g: E, par: bool) {
        self.generators.push(g);
        self.names.push(name);
        self.inverse_of.push(usize::MAX);
        self.parabolic.push(par);
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Writes a word given as generator indices.
    pub fn word_string(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return String::from("1");
        }
        let parts: Vec<&str> = word.iter().map(|&i| self.names[i].as_str()).collect();
        parts.join(" ")
    }

    /// Evaluates a word given as generator indices.
    pub fn evaluate(&self, word: &[usize]) -> E {
        word.iter().fold(E::identity(), |acc, &i| acc.compose(&self.generators[i]))
    }
}

impl GroupPresentation<Mat2<i64>> {
    /// PSL(2,ℤ) generated by S, T and T⁻¹, T parabolic.
    pub fn modular() -> GroupPresentation<Mat2<i64>> {
        GroupPresentation::new(
            alloc::vec![
                (String::from("S"), Mat2::new(0, -1, 1, 0), false),
                (String::from("T"), Mat2::new(1, 1, 0, 1), true),
            ],
            MODULAR_BASEPOINT,
        )
        .expect("modular presentation is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_presentation_shape() {
        let p = GroupPresentation::modular();
        assert_eq!(p.len(), 3);
        assert_eq!(p.names, ["S", "T", "T^-1"]);
        assert_eq!(p.inverse_of, [0, 2, 1]);
        assert_eq!(p.parabolic, [false, true, true]);
    }

    #[test]
    fn rejects_bad_parabolic_marker() {
        let r = GroupPresentation::new(alloc::vec![(String::from("A"), Mat2::new(2i64, 1, 1, 1), true)], MODULAR_BASEPOINT);
        assert!(matches!(r, Err(Error::Presentation(_))));
    }
}
