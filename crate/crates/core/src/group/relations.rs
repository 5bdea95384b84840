use std::collections::BTreeMap;

use serde::Serialize;

use super::closure::{enumerate_group, word_transform};
use super::generators::{conjugated_generators, generator, GeneratorId};
use super::transform::{compose, power, product, Transform};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

fn g(id: GeneratorId) -> Transform {
    generator(id)
}

fn names(ids: &[GeneratorId]) -> Vec<String> {
    ids.iter().map(|g| g.name().to_string()).collect()
}

fn order_of(ids: &[GeneratorId]) -> usize {
    let gens: Vec<Transform> = ids.iter().map(|&i| g(i)).collect();
    enumerate_group(&gens, &names(ids)).map(|gr| gr.order()).unwrap_or(0)
}

fn commutes(x: &Transform, y: &Transform) -> bool {
    compose(x, y) == compose(y, x)
}

fn sequence(ids: &[GeneratorId]) -> Transform {
    let gens: Vec<Transform> = ids.iter().map(|&i| g(i)).collect();
    let word: Vec<usize> = (0..ids.len()).collect();
    word_transform(&gens, &word)
}

type Perm = [usize; 4];

fn perm_compose(outer: &Perm, inner: &Perm) -> Perm {
    [outer[inner[0]], outer[inner[1]], outer[inner[2]], outer[inner[3]]]
}

fn perm_order(p: &Perm) -> usize {
    let id = [0, 1, 2, 3];
    let mut acc = *p;
    let mut r = 1;
    while acc != id {
        acc = perm_compose(p, &acc);
        r += 1;
    }
    r
}

fn all_perms() -> Vec<Perm> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&i| seen[i] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Multiset `order -> count` over all elements.
pub fn order_multiset<I: IntoIterator<Item = usize>>(orders: I) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for o in orders {
        *m.entry(o).or_insert(0) += 1;
    }
    m
}

/// Element-order multiset of the symmetric group on four letters.
pub fn s4_order_multiset() -> BTreeMap<usize, usize> {
    order_multiset(all_perms().iter().map(perm_order))
}

/// Checks that `σ₃ ↦ (0 1), σ₄ ↦ (1 2), σ₅ ↦ (2 3)` extends to an isomorphism
/// `⟨σ₃,σ₄,σ₅⟩ → S₄`.
pub fn s4_isomorphism_holds() -> bool {
    let ids = [GeneratorId::Sigma3, GeneratorId::Sigma4, GeneratorId::Sigma5];
    let gens: Vec<Transform> = ids.iter().map(|&i| g(i)).collect();
    let images: [Perm; 3] = [[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2]];
    let Ok(group) = enumerate_group(&gens, &names(&ids)) else {
        return false;
    };
    // applying word[0] first means the image is s_{w_last} ∘ … ∘ s_{w_0}
    let phi: Vec<Perm> = group
        .elements
        .iter()
        .map(|e| e.word.iter().fold([0, 1, 2, 3], |acc, &i| perm_compose(&images[i], &acc)))
        .collect();
    let well_defined = group.elements.iter().enumerate().all(|(i, e)| {
        gens.iter().enumerate().all(|(gi, s)| {
            let j = group.position(&compose(&e.transform, s)).expect("closed");
            phi[j] == perm_compose(&images[gi], &phi[i])
        })
    });
    let mut distinct = phi.clone();
    distinct.sort();
    distinct.dedup();
    well_defined && distinct.len() == 24 && group.order() == 24
}

/// Element-order multiset of `⟨σ₃,σ₄,σ₅⟩`.
pub fn k_order_multiset() -> BTreeMap<usize, usize> {
    let ids = [GeneratorId::Sigma3, GeneratorId::Sigma4, GeneratorId::Sigma5];
    let gens: Vec<Transform> = ids.iter().map(|&i| g(i)).collect();
    match enumerate_group(&gens, &names(&ids)) {
        Ok(gr) => order_multiset(gr.elements.iter().map(|e| gr.element_order(&e.transform).unwrap_or(0))),
        Err(_) => BTreeMap::new(),
    }
}

/// Every structural claim about the group, each checked by exact equality.
pub fn check_relations() -> Vec<RelationCheck> {
    use GeneratorId::*;
    let id = Transform::identity();
    let mut out = Vec::new();
    let mut push = |name: &str, holds: bool| out.push(RelationCheck { name: name.to_string(), holds });

    for (ids, name, want) in [
        (&[Sigma0, Sigma1, Sigma2, Sigma3][..], "|<s0,s1,s2,s3>| = 96", 96),
        (&[Sigma1, Sigma2, Sigma3][..], "|<s1,s2,s3>| = 48", 48),
        (&[Sigma3, Sigma4, Sigma5][..], "|<s3,s4,s5>| = 24", 24),
        (&[Sigma0][..], "|<s0>| = 2", 2),
        (&[Sigma6][..], "|<s6>| = 2", 2),
    ] {
        push(name, order_of(ids) == want);
    }

    for (x, name) in [(Sigma0, "s0^2 = e"), (Sigma1, "s1^2 = e"), (Sigma2, "s2^2 = e"), (Sigma3, "s3^2 = e")] {
        push(name, power(&g(x), 2) == id);
    }
    for (x, name) in [(Sigma4, "s4^2 = e"), (Sigma5, "s5^2 = e"), (Sigma6, "s6^2 = e")] {
        push(name, power(&g(x), 2) == id);
    }
    push("s3 s5 = s5 s3", commutes(&g(Sigma3), &g(Sigma5)));
    push("(s3 s4)^3 = e", power(&product([&g(Sigma3), &g(Sigma4)]), 3) == id);
    push("(s4 s5)^3 = e", power(&product([&g(Sigma4), &g(Sigma5)]), 3) == id);
    for (x, name) in [(Sigma1, "s0 s1 = s1 s0"), (Sigma2, "s0 s2 = s2 s0"), (Sigma3, "s0 s3 = s3 s0")] {
        push(name, commutes(&g(Sigma0), &g(x)));
    }
    for (x, name) in [(Sigma3, "s6 s3 = s3 s6"), (Sigma4, "s6 s4 = s4 s6"), (Sigma5, "s6 s5 = s5 s6")] {
        push(name, commutes(&g(Sigma6), &g(x)));
    }

    push("s4 = s3 s2 s1 s3 s1 s2 s3", sequence(&[Sigma3, Sigma2, Sigma1, Sigma3, Sigma1, Sigma2, Sigma3]) == g(Sigma4));
    push("s5 = s1 s3 s1 s3 s1 s2", sequence(&[Sigma1, Sigma3, Sigma1, Sigma3, Sigma1, Sigma2]) == g(Sigma5));
    push("s6 = s1 s3 s1 s3 s1 s3", sequence(&[Sigma1, Sigma3, Sigma1, Sigma3, Sigma1, Sigma3]) == g(Sigma6));
    push(
        "s1 = s3 s4 s5 s4 s3 s6",
        product([&g(Sigma3), &g(Sigma4), &g(Sigma5), &g(Sigma4), &g(Sigma3), &g(Sigma6)]) == g(Sigma1),
    );
    push("s2 = s3 s5 s6", product([&g(Sigma3), &g(Sigma5), &g(Sigma6)]) == g(Sigma2));

    push("<s3,s4,s5> is isomorphic to S4 via adjacent transpositions", s4_isomorphism_holds());
    push("element orders of <s3,s4,s5> match S4", k_order_multiset() == s4_order_multiset());

    let conj = conjugated_generators();
    let conj_names: Vec<String> = (0..4).map(|i| format!("t{i}")).collect();
    let conj_order = enumerate_group(&conj, &conj_names).map(|gr| gr.order()).unwrap_or(0);
    push("|<tau s_i tau^-1>| = 96", conj_order == 96);
    out
}
