//! Rotation sets as polytopes, direction queries and the genericity test.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::max_face::tight_edges;
use crate::numeric::{dot, Scalar, DEFAULT_TOL};
use crate::orbits::{are_permutable, birkhoff_average, ElementaryOrbit};
use crate::potential::Potential;

/// A supporting hyperplane `normal · x = offset` of the hull, taken inside the
/// affine hull for degenerate polytopes. `vertices` index `Hull::vertices`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet<T: Scalar> {
    pub vertices: Vec<usize>,
    pub normal: Vec<T>,
    pub offset: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hull<T: Scalar> {
    /// Dimension of the affine hull of the generators.
    pub affine_dim: usize,
    pub vertices: Vec<Vec<T>>,
    pub facets: Vec<Facet<T>>,
}

#[derive(Clone, Debug)]
pub enum HullData<T: Scalar> {
    Explicit(Hull<T>),
    QueryOnly,
}

/// `Rot(Φ)` as the convex hull of the elementary-orbit rotation vectors.
#[derive(Clone, Debug)]
pub struct RotationPolytope<T: Scalar> {
    pub m: usize,
    /// `(orbit index, rv(μ_x))` for every orbit.
    pub generators: Vec<(usize, Vec<T>)>,
    pub hull: HullData<T>,
}

impl<T: Scalar> RotationPolytope<T> {
    pub fn explicit(&self) -> Option<&Hull<T>> {
        match &self.hull {
            HullData::Explicit(h) => Some(h),
            HullData::QueryOnly => None,
        }
    }

    /// Orbits whose rotation vector equals `point`.
    pub fn orbits_at(&self, point: &[T]) -> Vec<usize> {
        self.generators
            .iter()
            .filter(|(_, p)| same_point(p, point))
            .map(|(i, _)| *i)
            .collect()
    }

    /// Whether `x` lies in the hull (relative to its affine hull when degenerate).
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        let h = self.explicit().ok_or(Error::UnsupportedDimension(self.m))?;
        if h.affine_dim == 0 {
            return Ok(same_point(x, &h.vertices[0]));
        }
        if !in_affine_hull(&h.vertices, x) {
            return Ok(false);
        }
        Ok(h.facets.iter().all(|f| dot(&f.normal, x) <= f.offset.clone() + tol_of::<T>()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let text = |v: &[T]| v.iter().map(Scalar::to_text).collect::<Vec<_>>();
        let hull = match &self.hull {
            HullData::Explicit(h) => serde_json::json!({
                "affine_dim": h.affine_dim,
                "vertices": h.vertices.iter().map(|v| text(v)).collect::<Vec<_>>(),
                "vertices_f64": h.vertices.iter().map(|v| v.iter().map(Scalar::to_f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "facets": h.facets.iter().map(|f| serde_json::json!({
                    "vertices": f.vertices,
                    "normal": text(&f.normal),
                    "offset": f.offset.to_text(),
                })).collect::<Vec<_>>(),
            }),
            HullData::QueryOnly => serde_json::json!("query-only"),
        };
        serde_json::json!({
            "m": self.m,
            "generators": self.generators.iter().map(|(i, p)| serde_json::json!({"orbit": i, "rv": text(p)})).collect::<Vec<_>>(),
            "hull": hull,
        })
    }

    /// CSV point cloud: `orbit,segment,x1,...,xm,is_vertex`.
    pub fn to_csv(&self, orbits: &[ElementaryOrbit], word: impl Fn(&[usize]) -> String) -> String {
        let mut out = String::from("orbit,segment");
        for i in 1..=self.m {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",is_vertex\n");
        let verts = self.explicit().map(|h| h.vertices.clone()).unwrap_or_default();
        for (i, p) in &self.generators {
            out.push_str(&format!("{i},{}", word(&orbits[*i].segment)));
            for x in p {
                out.push_str(&format!(",{}", x.to_f64()));
            }
            let v = verts.iter().any(|q| same_point(q, p));
            out.push_str(&format!(",{}\n", u8::from(v)));
        }
        out
    }
}

fn tol_of<T: Scalar>() -> T {
    if T::EXACT {
        T::zero()
    } else {
        T::from_f64(DEFAULT_TOL).expect("tolerance")
    }
}

fn is_zero_tol<T: Scalar>(x: &T) -> bool {
    x.is_tie_zero(DEFAULT_TOL)
}

fn same_point<T: Scalar>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.tie(y, DEFAULT_TOL))
}

fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn cross2<T: Scalar>(o: &[T], a: &[T], b: &[T]) -> T {
    (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
        - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
}

fn cross3<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn lex<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn dedup_points<T: Scalar>(pts: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut v: Vec<Vec<T>> = pts.to_vec();
    v.sort_by(|a, b| lex(a, b));
    v.dedup_by(|a, b| same_point(a, b));
    v
}

/// Row-reduce difference vectors; returns an orthogonal-free basis of the
/// affine directions.
fn affine_basis<T: Scalar>(pts: &[Vec<T>]) -> Vec<Vec<T>> {
    let Some(p0) = pts.first() else { return Vec::new() };
    let mut rows: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, p0)).collect();
    let m = p0.len();
    let mut basis = Vec::new();
    let mut col = 0;
    while col < m && !rows.is_empty() {
        // pivot with the largest magnitude in this column
        let piv = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1[col].abs().partial_cmp(&b.1[col].abs()).unwrap_or(Ordering::Equal))
            .map(|(i, _)| i)
            .expect("nonempty");
        if is_zero_tol(&rows[piv][col]) {
            col += 1;
            continue;
        }
        let pr = rows.swap_remove(piv);
        for r in rows.iter_mut() {
            let f = r[col].clone() / pr[col].clone();
            for c in 0..m {
                r[c] = r[c].clone() - f.clone() * pr[c].clone();
            }
        }
        basis.push(pr);
        col += 1;
    }
    basis
}

fn in_affine_hull<T: Scalar>(verts: &[Vec<T>], x: &[T]) -> bool {
    let d = affine_basis(verts).len();
    let mut with = verts.to_vec();
    with.push(x.to_vec());
    affine_basis(&with).len() == d
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn hull2<T: Scalar>(pts: &[Vec<T>]) -> Vec<Vec<T>> {
    let p = dedup_points(pts);
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<Vec<T>> = Vec::new();
    for q in &p {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= tol_of::<T>() {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<Vec<T>> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= tol_of::<T>() {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Two extreme points of a collinear set, with the line direction.
fn segment_hull<T: Scalar>(pts: &[Vec<T>], dir: &[T]) -> Hull<T> {
    let key = |p: &Vec<T>| dot(dir, p);
    let lo = pts.iter().min_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(Ordering::Equal)).expect("points");
    let hi = pts.iter().max_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(Ordering::Equal)).expect("points");
    let neg: Vec<T> = dir.iter().map(|x| -x.clone()).collect();
    Hull {
        affine_dim: 1,
        vertices: vec![lo.clone(), hi.clone()],
        facets: vec![
            Facet {
                vertices: vec![0],
                offset: dot(&neg, lo),
                normal: neg,
            },
            Facet {
                vertices: vec![1],
                offset: dot(dir, hi),
                normal: dir.to_vec(),
            },
        ],
    }
}

/// Polygon hull of points in a plane of `ℝ^m` (m = 2 or 3). `plane_normal`
/// is `None` for `m = 2`.
fn polygon_hull<T: Scalar>(pts: &[Vec<T>], plane_normal: Option<&[T]>) -> Hull<T> {
    // project by dropping the coordinate where the normal is largest
    let drop = plane_normal.map(|n| {
        (0..3)
            .max_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap_or(Ordering::Equal))
            .expect("three coordinates")
    });
    let keep: Vec<usize> = (0..pts[0].len()).filter(|&c| Some(c) != drop).collect();
    let proj: Vec<Vec<T>> = pts.iter().map(|p| keep.iter().map(|&c| p[c].clone()).collect()).collect();
    let ring2 = hull2(&proj);
    // lift back to the original points
    let ring: Vec<Vec<T>> = ring2
        .iter()
        .map(|q| pts[proj.iter().position(|p| same_point(p, q)).expect("hull point")].clone())
        .collect();
    let n = ring.len();
    let mut facets = Vec::new();
    for i in 0..n {
        let a = &ring[i];
        let b = &ring[(i + 1) % n];
        let e = sub(b, a);
        let mut normal = match plane_normal {
            None => vec![e[1].clone(), -e[0].clone()],
            Some(nv) => cross3(&e, nv),
        };
        // orient outward using any other vertex
        if let Some(c) = ring.iter().find(|c| !same_point(c, a) && !same_point(c, b)) {
            if dot(&normal, c) > dot(&normal, a) {
                normal.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        facets.push(Facet {
            vertices: vec![i, (i + 1) % n],
            offset: dot(&normal, a),
            normal,
        });
    }
    Hull {
        affine_dim: 2,
        vertices: ring,
        facets,
    }
}

/// Full-dimensional hull in `ℝ³`: every supporting plane through three
/// points, with coplanar facets merged.
fn hull3<T: Scalar>(pts: &[Vec<T>]) -> Hull<T> {
    let n = pts.len();
    let mut planes: BTreeMap<Vec<usize>, (Vec<T>, T)> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let e1 = sub(&pts[j], &pts[i]);
            for k in j + 1..n {
                let e2 = sub(&pts[k], &pts[i]);
                let mut normal = cross3(&e1, &e2);
                if normal.iter().all(is_zero_tol) {
                    continue;
                }
                let off = dot(&normal, &pts[i]);
                let mut above = false;
                let mut below = false;
                for p in pts {
                    let s = dot(&normal, p) - off.clone();
                    if s.is_tie_zero(DEFAULT_TOL) {
                        continue;
                    }
                    if s > T::zero() {
                        above = true;
                    } else {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    normal.iter_mut().for_each(|x| *x = -x.clone());
                }
                let off = dot(&normal, &pts[i]);
                let on: Vec<usize> = (0..n)
                    .filter(|&q| (dot(&normal, &pts[q]) - off.clone()).is_tie_zero(DEFAULT_TOL))
                    .collect();
                planes.entry(on).or_insert((normal, off));
            }
        }
    }
    let mut vertices: Vec<Vec<T>> = Vec::new();
    let mut facets = Vec::new();
    for (on, (normal, off)) in planes {
        let face_pts: Vec<Vec<T>> = on.iter().map(|&q| pts[q].clone()).collect();
        let poly = polygon_hull(&face_pts, Some(&normal));
        let ids = poly
            .vertices
            .iter()
            .map(|v| match vertices.iter().position(|w| same_point(w, v)) {
                Some(p) => p,
                None => {
                    vertices.push(v.clone());
                    vertices.len() - 1
                }
            })
            .collect();
        facets.push(Facet {
            vertices: ids,
            normal,
            offset: off,
        });
    }
    Hull {
        affine_dim: 3,
        vertices,
        facets,
    }
}

/// Explicit convex hull of points in `ℝ^m`, `m ≤ 3`.
pub fn convex_hull<T: Scalar>(points: &[Vec<T>]) -> Result<Hull<T>> {
    let m = points.first().map_or(0, Vec::len);
    if points.is_empty() || m == 0 {
        return Err(Error::invalid("no points"));
    }
    if m > 3 {
        return Err(Error::UnsupportedDimension(m));
    }
    let pts = dedup_points(points);
    let basis = affine_basis(&pts);
    match basis.len() {
        0 => Ok(Hull {
            affine_dim: 0,
            vertices: vec![pts[0].clone()],
            facets: Vec::new(),
        }),
        1 => Ok(segment_hull(&pts, &basis[0])),
        2 if m == 2 => Ok(polygon_hull(&pts, None)),
        2 => {
            let nv = cross3(&basis[0], &basis[1]);
            Ok(polygon_hull(&pts, Some(&nv)))
        }
        _ => Ok(hull3(&pts)),
    }
}

/// Rotation vectors of all orbits and, for `m ≤ 3`, their convex hull.
pub fn rotation_set<T: Scalar>(phi: &Potential<T>, orbits: &[ElementaryOrbit]) -> Result<RotationPolytope<T>> {
    if orbits.is_empty() {
        return Err(Error::invalid("no orbits supplied"));
    }
    let generators = orbits
        .iter()
        .enumerate()
        .map(|(i, o)| birkhoff_average(o, phi).map(|v| (i, v)))
        .collect::<Result<Vec<_>>>()?;
    let hull = if phi.m() <= 3 {
        let pts: Vec<Vec<T>> = generators.iter().map(|(_, p)| p.clone()).collect();
        HullData::Explicit(convex_hull(&pts)?)
    } else {
        HullData::QueryOnly
    };
    Ok(RotationPolytope {
        m: phi.m(),
        generators,
        hull,
    })
}

/// A cycle of the recoded graph maximizing `α·rv`, ties broken by `γ·rv`.
pub(crate) fn support_orbit<T: Scalar>(phi: &Potential<T>, alpha: &[T], gamma: &[T]) -> Result<ElementaryOrbit> {
    let rec = phi.recoded();
    let n = rec.num_states();
    let weights = |dir: &[T]| -> Vec<T> { (0..n).map(|s| dot(dir, phi.value(s))).collect() };
    let (_, _, first, _) = tight_edges(rec.graph(), &weights(alpha), DEFAULT_TOL)?;
    let g1 = Digraph::with_edges(n, first);
    let (_, _, second, _) = tight_edges(&g1, &weights(gamma), DEFAULT_TOL)?;
    let g2 = Digraph::with_edges(n, second);
    let comp = g2
        .sccs()
        .into_iter()
        .find(|c| g2.is_nontrivial(c))
        .ok_or_else(|| Error::numeric("tight subgraph has no cycle", 0.0))?;
    let mut inside = vec![false; n];
    comp.iter().for_each(|&v| inside[v] = true);
    // walk inside the component until a node repeats
    let mut seen = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut v = comp[0];
    while seen[v] == usize::MAX {
        seen[v] = path.len();
        path.push(v);
        v = *g2
            .successors(v)
            .iter()
            .find(|&&x| inside[x])
            .expect("nontrivial component");
    }
    Ok(ElementaryOrbit::from_cycle(rec, path.split_off(seen[v])))
}

/// `Rot(Φ)` for `m ≤ 2` from exact support queries (maximum cycle means in
/// finitely many directions), without enumerating every elementary orbit.
/// Generators are the hull vertices, indexing the returned witness orbits.
pub fn rotation_set_by_support<T: Scalar>(phi: &Potential<T>) -> Result<(RotationPolytope<T>, Vec<ElementaryOrbit>)> {
    let m = phi.m();
    if m > 2 {
        return Err(Error::UnsupportedDimension(m));
    }
    let e = |x: i64, y: i64| -> Vec<T> {
        let v = [T::from_int(x), T::from_int(y)];
        v[..m].to_vec()
    };
    let mut witnesses: Vec<ElementaryOrbit> = Vec::new();
    let mut points: Vec<Vec<T>> = Vec::new();
    let mut query = |alpha: &[T], gamma: &[T]| -> Result<Vec<T>> {
        let o = support_orbit(phi, alpha, gamma)?;
        let p = birkhoff_average(&o, phi)?;
        if !points.iter().any(|q| same_point(q, &p)) {
            points.push(p.clone());
            witnesses.push(o);
        }
        Ok(p)
    };
    let hi = query(&e(1, 0), &e(0, 1))?;
    let lo = query(&e(-1, 0), &e(0, -1))?;
    if m == 2 && !same_point(&hi, &lo) {
        // refine both chains through the outward normal of each edge
        let mut stack = vec![(lo.clone(), hi.clone()), (hi, lo)];
        while let Some((p, q)) = stack.pop() {
            let d = sub(&q, &p);
            let normal = vec![d[1].clone(), -d[0].clone()];
            let r = query(&normal, &d)?;
            if dot(&normal, &r) > dot(&normal, &p) + tol_of::<T>() {
                stack.push((p, r.clone()));
                stack.push((r, q));
            }
        }
    }
    let hull = convex_hull(&points)?;
    let generators = hull
        .vertices
        .iter()
        .map(|v| {
            let i = points.iter().position(|p| same_point(p, v)).expect("vertex was queried");
            (i, v.clone())
        })
        .collect();
    Ok((
        RotationPolytope {
            m,
            generators,
            hull: HullData::Explicit(hull),
        },
        witnesses,
    ))
}

/// The face `F_α` identified by the orbits attaining `max α·rv`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceFingerprint<T: Scalar> {
    #[serde(serialize_with = "ser_vec")]
    pub direction: Vec<T>,
    #[serde(serialize_with = "ser_one")]
    pub max_value: T,
    pub orbit_set: Vec<usize>,
}

fn ser_vec<T: Scalar, S: serde::Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Scalar::to_text))
}

fn ser_one<T: Scalar, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_text())
}

pub fn face_in_direction<T: Scalar>(phi: &Potential<T>, alpha: &[T], orbits: &[ElementaryOrbit]) -> Result<FaceFingerprint<T>> {
    if alpha.iter().all(|a| a.is_zero()) {
        return Err(Error::invalid("direction must be nonzero"));
    }
    let scalar = phi.scalarize(alpha)?;
    let vals: Vec<T> = orbits
        .iter()
        .map(|o| birkhoff_average(o, &scalar).map(|v| v[0].clone()))
        .collect::<Result<_>>()?;
    fingerprint_from_values(alpha.to_vec(), &vals)
}

pub(crate) fn fingerprint_from_values<T: Scalar>(direction: Vec<T>, vals: &[T]) -> Result<FaceFingerprint<T>> {
    let max = vals
        .iter()
        .cloned()
        .reduce(|a, b| if b > a { b } else { a })
        .ok_or_else(|| Error::invalid("no orbits supplied"))?;
    let orbit_set = (0..vals.len()).filter(|&i| vals[i].tie(&max, DEFAULT_TOL)).collect();
    Ok(FaceFingerprint {
        direction,
        max_value: max,
        orbit_set,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GenericityReport {
    pub generic: bool,
    /// Pairs of orbits at the same vertex that are not permutable.
    pub vertex_violations: Vec<(usize, usize)>,
    /// Orbits on the relative boundary away from the vertices.
    pub boundary_violations: Vec<usize>,
}

/// Test the two conditions defining the generic class `U(k)`.
pub fn genericity_check<T: Scalar>(phi: &Potential<T>, orbits: &[ElementaryOrbit]) -> Result<GenericityReport> {
    let poly = rotation_set(phi, orbits)?;
    let hull = poly.explicit().ok_or(Error::UnsupportedDimension(poly.m))?;
    let mut vertex_violations = Vec::new();
    for v in &hull.vertices {
        let at = poly.orbits_at(v);
        for (a, &x) in at.iter().enumerate() {
            for &y in &at[a + 1..] {
                if !are_permutable(&orbits[x], &orbits[y]) {
                    vertex_violations.push((x, y));
                }
            }
        }
    }
    let mut boundary_violations = Vec::new();
    for (i, p) in &poly.generators {
        if hull.vertices.iter().any(|v| same_point(v, p)) {
            continue;
        }
        if hull.facets.iter().any(|f| dot(&f.normal, p).tie(&f.offset, DEFAULT_TOL)) {
            boundary_violations.push(*i);
        }
    }
    Ok(GenericityReport {
        generic: vertex_violations.is_empty() && boundary_violations.is_empty(),
        vertex_violations,
        boundary_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, Rational};
    use crate::orbits::elementary_orbits;
    use crate::sft::Sft;

    fn pt(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn square_with_interior_points() {
        let pts = vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(1, 2), (0, 1)]),
            pt(&[(1, 1), (1, 1)]),
            pt(&[(0, 1), (1, 1)]),
            pt(&[(1, 2), (1, 2)]),
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            for p in &pts {
                assert!(dot(&f.normal, p) <= f.offset);
            }
        }
    }

    #[test]
    fn degenerate_hulls() {
        let h = convex_hull(&[pt(&[(1, 1), (2, 1)]), pt(&[(1, 1), (2, 1)])]).unwrap();
        assert_eq!(h.affine_dim, 0);
        let h = convex_hull(&[pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (1, 1)]), pt(&[(1, 2), (1, 2)])]).unwrap();
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertices.len(), 2);
        let h = convex_hull(&[pt(&[(3, 1)]), pt(&[(-1, 1)]), pt(&[(0, 1)])]).unwrap();
        assert_eq!(h.vertices, vec![pt(&[(-1, 1)]), pt(&[(3, 1)])]);
    }

    #[test]
    fn cube_and_planar_triangle_in_space() {
        let mut pts = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    pts.push(pt(&[(a, 1), (b, 1), (c, 1)]));
                }
            }
        }
        pts.push(pt(&[(1, 2), (1, 2), (1, 1)]));
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.affine_dim, 3);
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        assert!(h.facets.iter().all(|f| f.vertices.len() == 4));
        let tri = vec![pt(&[(1, 1), (0, 1), (0, 1)]), pt(&[(0, 1), (1, 1), (0, 1)]), pt(&[(0, 1), (0, 1), (1, 1)]), pt(&[(1, 3), (1, 3), (1, 3)])];
        let h = convex_hull(&tri).unwrap();
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.vertices.len(), 3);
        for f in &h.facets {
            for p in &tri {
                assert!(dot(&f.normal, p) <= f.offset);
            }
        }
    }

    #[test]
    fn indicator_segment_is_generic() {
        let s = Sft::full(2);
        let orbits = elementary_orbits(&s, 1).unwrap();
        let phi = Potential::from_fn(&s, 1, |b| vec![rat(i64::from(b[0] == 0), 1)]).unwrap();
        let poly = rotation_set(&phi, &orbits).unwrap();
        let h = poly.explicit().unwrap();
        assert_eq!(h.vertices, vec![vec![rat(0, 1)], vec![rat(1, 1)]]);
        assert!(genericity_check(&phi, &orbits).unwrap().generic);
        let f = face_in_direction(&phi, &[rat(1, 1)], &orbits).unwrap();
        assert_eq!(f.orbit_set, vec![0]);
        assert_eq!(f.max_value, rat(1, 1));
    }

    #[test]
    fn constant_potential_is_not_generic() {
        let s = Sft::full(2);
        let orbits = elementary_orbits(&s, 2).unwrap();
        let phi = Potential::constant(&s, 2, vec![rat(1, 1), rat(2, 1)]).unwrap();
        let poly = rotation_set(&phi, &orbits).unwrap();
        assert_eq!(poly.explicit().unwrap().affine_dim, 0);
        let r = genericity_check(&phi, &orbits).unwrap();
        assert!(!r.generic);
        assert!(r.vertex_violations.contains(&(0, 1)));
        let f = face_in_direction(&phi, &[rat(1, 1), rat(-3, 1)], &orbits).unwrap();
        assert_eq!(f.orbit_set.len(), orbits.len());
        assert!(face_in_direction(&phi, &[rat(0, 1), rat(0, 1)], &orbits).is_err());
    }

    #[test]
    fn support_hull_of_example_b1_is_the_triangle() {
        let phi = crate::builtins::example_b1_potential();
        let (rot, witnesses) = rotation_set_by_support(&phi).unwrap();
        let h = rot.explicit().unwrap();
        let mut v = h.vertices.clone();
        v.sort_by(|a, b| lex(a, b));
        assert_eq!(v, vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 2), (1, 1)]), pt(&[(1, 1), (0, 1)])]);
        for (i, p) in &rot.generators {
            assert_eq!(&birkhoff_average(&witnesses[*i], &phi).unwrap(), p);
        }
    }

    #[test]
    fn support_hull_matches_orbit_hull() {
        let s = Sft::full(3);
        let orbits = elementary_orbits(&s, 2).unwrap();
        for seed in 0..20i64 {
            let phi = Potential::from_fn(&s, 2, |b| {
                let x = (b[0] as i64 * 7 + b[1] as i64 * 3 + seed * 5) % 11 - 5;
                let y = (b[0] as i64 * 2 + b[1] as i64 * 9 + seed * 3) % 7 - 3;
                vec![rat(x, 2), rat(y, 3)]
            })
            .unwrap();
            let a = rotation_set(&phi, &orbits).unwrap();
            let (b, _) = rotation_set_by_support(&phi).unwrap();
            let mut va = a.explicit().unwrap().vertices.clone();
            let mut vb = b.explicit().unwrap().vertices.clone();
            va.sort_by(|x, y| lex(x, y));
            vb.sort_by(|x, y| lex(x, y));
            assert_eq!(va, vb, "seed {seed}");
        }
    }
}
