use std::collections::BTreeMap;

use itertools::Itertools;

use super::{Simplex, SimplicialComplex};

/// Barycentric subdivision. Output vertex `i` is the barycenter of the
/// `i`-th simplex of `k` in canonical order; see [`barycentric_carriers`].
pub fn barycentric_subdivide(k: &SimplicialComplex) -> SimplicialComplex {
    barycentric_carriers(k).0
}

/// Barycentric subdivision together with the carrier simplex of each new vertex.
pub fn barycentric_carriers(k: &SimplicialComplex) -> (SimplicialComplex, Vec<Simplex>) {
    let carriers: Vec<Simplex> = k.simplices().cloned().collect();
    let index: BTreeMap<&Simplex, usize> = carriers.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut chains = Vec::new();
    for facet in k.facets() {
        for perm in facet.iter().copied().permutations(facet.len()) {
            let chain: Vec<usize> = (1..=perm.len())
                .map(|len| {
                    let mut s = perm[..len].to_vec();
                    s.sort_unstable();
                    index[&s]
                })
                .collect();
            chains.push(chain);
        }
    }
    let out = SimplicialComplex::new(carriers.len(), chains).expect("chains are valid simplices");
    let out = match k.coords() {
        Some(coords) => {
            let bary: Vec<Vec<f64>> = carriers
                .iter()
                .map(|s| {
                    let d = coords[s[0]].len();
                    (0..d).map(|i| s.iter().map(|&v| coords[v][i]).sum::<f64>() / s.len() as f64).collect()
                })
                .collect();
            out.with_coords(bary).expect("consistent coords")
        }
        None => out,
    };
    (out, carriers)
}

#[cfg(test)]
mod tests {
    use super::super::{h1_rank, shapes};
    use super::*;

    #[test]
    fn edge_triangle_hexagon() {
        let e = barycentric_subdivide(&shapes::simplex(1));
        assert_eq!((e.n_vertices(), e.simplices_of_dim(1).count()), (3, 2));
        let t = barycentric_subdivide(&shapes::simplex(2));
        assert_eq!((t.n_vertices(), t.simplices_of_dim(2).count()), (7, 6));
        let h = barycentric_subdivide(&shapes::cycle(3));
        assert_eq!((h.n_vertices(), h.simplices_of_dim(1).count()), (6, 6));
        assert_eq!(h1_rank(&h), 1);
        t.check_face_closure().unwrap();
    }

    #[test]
    fn barycenters_are_averaged() {
        let (s, carriers) = barycentric_carriers(&shapes::unit_square());
        let i = carriers.iter().position(|c| c == &vec![0, 2]).unwrap();
        assert_eq!(s.coord(i).unwrap(), &[0.5, 0.5]);
    }
}
