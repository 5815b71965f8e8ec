//! Built-in polytopes, potentials and raw-moment regions.

use crate::error::{Error, Result};
use crate::moments::{unit_disc_moments_over_pi, MomentTensor};
use crate::polytope::{Facet, Polytope};
use crate::rational::int;

pub const POLYTOPE_PRESETS: [&str; 5] = ["cp1", "cp2", "cp1xcp1", "dp6", "threefold"];

pub const MOMENT_PRESETS: [&str; 1] = ["disc"];

fn facets(rows: &[&[i64]]) -> Vec<Facet> {
    rows.iter().map(|v| Facet::new(v.to_vec(), int(1))).collect()
}

/// Facet normals of a preset; every constant is `c_k = 1`.
fn preset_facets(name: &str) -> Option<(usize, Vec<Facet>)> {
    let f = match name {
        // [-1, 1]
        "cp1" => (1, facets(&[&[1], &[-1]])),
        // triangle (-1,-1), (2,-1), (-1,2)
        "cp2" => (2, facets(&[&[1, 0], &[0, 1], &[-1, -1]])),
        "cp1xcp1" => (2, facets(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])),
        // hexagon (1,0), (0,1), (-1,1), (-1,0), (0,-1), (1,-1)
        "dp6" => (
            2,
            facets(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[-1, -1], &[1, 1]]),
        ),
        // tetrahedron cut at two skew edges
        "threefold" => (
            3,
            facets(&[
                &[1, 0, 0],
                &[0, 1, 0],
                &[0, 0, 1],
                &[-1, 0, 0],
                &[-1, -1, 0],
                &[1, 0, -1],
            ]),
        ),
        _ => return None,
    };
    Some(f)
}

pub fn polytope(name: &str) -> Result<Polytope> {
    let (dim, facets) = preset_facets(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown polytope preset {name:?} (known: {})",
            POLYTOPE_PRESETS.join(", ")
        ))
    })?;
    Polytope::new(dim, facets, Some(name.to_string()))
}

pub fn moments(name: &str) -> Result<MomentTensor> {
    match name {
        "disc" => Ok(unit_disc_moments_over_pi()),
        _ => Err(Error::InvalidArgument(format!(
            "unknown moment preset {name:?} (known: {})",
            MOMENT_PRESETS.join(", ")
        ))),
    }
}
