use std::collections::HashMap;

use super::transform::{compose, Transform};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 10_000;

/// An element of an enumerated group with a shortest generating word.
///
/// `word` holds indices into the generator list; applying them in order,
/// `word[0]` first, reproduces `transform`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub transform: Transform,
    pub word: Vec<usize>,
}

/// Result of a breadth-first closure.
#[derive(Clone, Debug)]
pub struct Group {
    pub generators: Vec<Transform>,
    pub names: Vec<String>,
    /// Breadth-first discovery order; index 0 is the identity.
    pub elements: Vec<GroupElement>,
    index: HashMap<Transform, usize>,
}

impl Group {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, t: &Transform) -> bool {
        self.index.contains_key(t)
    }

    pub fn position(&self, t: &Transform) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Space separated generator names, `"e"` for the empty word.
    pub fn word_label(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Elements sorted by canonical form (the deterministic report order).
    pub fn sorted_by_canonical(&self) -> Vec<&GroupElement> {
        let mut v: Vec<(String, &GroupElement)> =
            self.elements.iter().map(|e| (e.transform.canonical(), e)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, e)| e).collect()
    }

    /// Smallest `r ≥ 1` with `tʳ = id`; `None` past the group order.
    pub fn element_order(&self, t: &Transform) -> Option<usize> {
        element_order(t, self.order().max(1))
    }
}

/// Apply generators in sequence, `word[0]` first.
pub fn word_transform(gens: &[Transform], word: &[usize]) -> Transform {
    word.iter().fold(Transform::identity(), |acc, &i| compose(&acc, &gens[i]))
}

/// Order of `t`, searching up to `limit`.
pub fn element_order(t: &Transform, limit: usize) -> Option<usize> {
    let mut acc = *t;
    for r in 1..=limit {
        if acc.is_identity() {
            return Some(r);
        }
        acc = compose(&acc, t);
    }
    None
}

/// Breadth-first closure of `gens` with the default cap.
pub fn enumerate_group(gens: &[Transform], names: &[String]) -> Result<Group> {
    enumerate_group_capped(gens, names, DEFAULT_CAP)
}

pub fn enumerate_group_capped(gens: &[Transform], names: &[String], cap: usize) -> Result<Group> {
    if gens.is_empty() {
        return Err(Error::Config("generator set is empty".into()));
    }
    if names.len() != gens.len() {
        return Err(Error::Config("one name per generator is required".into()));
    }
    let id = Transform::identity();
    let mut elements = vec![GroupElement { transform: id, word: Vec::new() }];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for (gi, g) in gens.iter().enumerate() {
                let t = compose(&elements[i].transform, g);
                if index.contains_key(&t) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::Size { cap });
                }
                let mut word = elements[i].word.clone();
                word.push(gi);
                index.insert(t, elements.len());
                next.push(elements.len());
                elements.push(GroupElement { transform: t, word });
            }
        }
        frontier = next;
    }
    Ok(Group { generators: gens.to_vec(), names: names.to_vec(), elements, index })
}
