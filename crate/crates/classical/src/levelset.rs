//! Level sets of v̄ on the torus by marching squares in lattice coordinates.
//!
//! Sign changes on grid edges become nodes; each cell links pairs of its
//! nodes (saddle cells are resolved by the value at the cell center), so
//! every node has exactly two links and the link graph is a union of cycles.
//! Unwrapped accumulation along a cycle gives its lattice winding.

use crate::{find_critical_points, ClassicalError, CriticalKind};
use magspec_lattice::AveragedPotential;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetOptions {
    /// Grid points per lattice direction.
    pub grid: usize,
    /// Minimum distance from saddle values, as a fraction of g_max − g_min.
    pub separatrix_fraction: f64,
    /// Saddle values, if already known; otherwise they are computed.
    pub saddle_values: Option<Vec<f64>>,
}

impl Default for LevelSetOptions {
    fn default() -> Self {
        Self {
            grid: 256,
            separatrix_fraction: 1e-3,
            saddle_values: None,
        }
    }
}

/// One connected component of {v̄ = g}, oriented along the drift flow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetComponent {
    /// Unwrapped vertices; the last equals the first shifted by
    /// winding·(a₁, a₂).
    pub polyline: Vec<[f64; 2]>,
    pub g: f64,
    /// Lattice winding (n₁, n₂), counted along the flow.
    pub winding: (i64, i64),
    /// Sign of the enclosed area for contractible components (+1
    /// counterclockwise), 0 for non-contractible ones.
    pub orientation: i8,
}

impl LevelSetComponent {
    pub fn contractible(&self) -> bool {
        self.winding == (0, 0)
    }

    /// Signed area ½∮(y₁dy₂ − y₂dy₁) of a contractible component.
    pub fn signed_area(&self) -> f64 {
        self.polyline
            .windows(2)
            .map(|w| 0.5 * (w[0][0] * w[1][1] - w[0][1] * w[1][0]))
            .sum()
    }
}

pub fn trace_level_set(
    av: &AveragedPotential,
    g: f64,
    opts: &LevelSetOptions,
) -> Result<Vec<LevelSetComponent>, ClassicalError> {
    let n = opts.grid;
    if n < 8 {
        return Err(ClassicalError::Domain(
            "level-set grid must have at least 8 points".into(),
        ));
    }
    let saddles = match &opts.saddle_values {
        Some(s) => s.clone(),
        None => {
            let set = find_critical_points(av);
            set.of_kind(CriticalKind::Saddle).map(|p| p.value).collect()
        }
    };
    let lattice = *av.lattice();
    let mut f = vec![0.0; n * n];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..n {
        for i in 0..n {
            let v = av.value(lattice.point(i as f64 / n as f64, j as f64 / n as f64));
            lo = lo.min(v);
            hi = hi.max(v);
            f[j * n + i] = v - g;
        }
    }
    let tol = opts.separatrix_fraction * (hi - lo);
    for &s in &saddles {
        if (g - s).abs() < tol {
            return Err(ClassicalError::SeparatrixProximity {
                g,
                critical: s,
                tolerance: tol,
            });
        }
    }
    let at = |i: usize, j: usize| f[(j % n) * n + (i % n)];
    let pos = |v: f64| v >= 0.0;

    // Node ids: horizontal edge (i,j)-(i+1,j) at 2(jn+i), vertical (i,j)-(i,j+1) at 2(jn+i)+1.
    let mut node_pos: Vec<Option<[f64; 2]>> = vec![None; 2 * n * n];
    for j in 0..n {
        for i in 0..n {
            let a = at(i, j);
            let b = at(i + 1, j);
            if pos(a) != pos(b) {
                node_pos[2 * (j * n + i)] = Some([i as f64 + a / (a - b), j as f64]);
            }
            let c = at(i, j + 1);
            if pos(a) != pos(c) {
                node_pos[2 * (j * n + i) + 1] = Some([i as f64, j as f64 + a / (a - c)]);
            }
        }
    }
    let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 2 * n * n];
    let link = |a: usize, b: usize, cell: usize, links: &mut Vec<Vec<(usize, usize)>>| {
        links[a].push((b, cell));
        links[b].push((a, cell));
    };
    for j in 0..n {
        for i in 0..n {
            let cell = j * n + i;
            let (i1, j1) = ((i + 1) % n, (j + 1) % n);
            let bottom = 2 * (j * n + i);
            let right = 2 * (j * n + i1) + 1;
            let top = 2 * (j1 * n + i);
            let left = 2 * (j * n + i) + 1;
            let edges: Vec<usize> = [bottom, right, top, left]
                .into_iter()
                .filter(|&e| node_pos[e].is_some())
                .collect();
            match edges.len() {
                0 => {}
                2 => link(edges[0], edges[1], cell, &mut links),
                4 => {
                    let centre = av.value(lattice.point((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64)) - g;
                    if pos(centre) == pos(at(i, j)) {
                        link(bottom, right, cell, &mut links);
                        link(top, left, cell, &mut links);
                    } else {
                        link(bottom, left, cell, &mut links);
                        link(right, top, cell, &mut links);
                    }
                }
                _ => {
                    return Err(ClassicalError::Tracing(format!(
                        "cell ({i},{j}) has an odd number of crossings"
                    )))
                }
            }
        }
    }

    let nf = n as f64;
    let wrap = |d: f64| d - nf * (d / nf).round();
    let mut visited = vec![false; 2 * n * n];
    let mut components = Vec::new();
    for start in 0..2 * n * n {
        if node_pos[start].is_none() || visited[start] {
            continue;
        }
        if links[start].len() != 2 {
            return Err(ClassicalError::Tracing(format!(
                "node {start} has {} links",
                links[start].len()
            )));
        }
        let mut grid_path: Vec<[f64; 2]> = vec![node_pos[start].unwrap()];
        visited[start] = true;
        let (mut cur, mut via) = (start, usize::MAX);
        let mut unwrapped = node_pos[start].unwrap();
        loop {
            let &(next, cell) = links[cur].iter().find(|&&(_, c)| c != via).unwrap_or(&links[cur][0]);
            let p = node_pos[next].unwrap();
            let prev = node_pos[cur].unwrap();
            unwrapped = [unwrapped[0] + wrap(p[0] - prev[0]), unwrapped[1] + wrap(p[1] - prev[1])];
            if next == start {
                grid_path.push(unwrapped);
                break;
            }
            visited[next] = true;
            grid_path.push(unwrapped);
            cur = next;
            via = cell;
        }
        let first = grid_path[0];
        let last = *grid_path.last().unwrap();
        let winding = (
            ((last[0] - first[0]) / nf).round() as i64,
            ((last[1] - first[1]) / nf).round() as i64,
        );
        let mut polyline: Vec<[f64; 2]> = grid_path[..grid_path.len() - 1]
            .iter()
            .map(|q| refine(av, lattice.point(q[0] / nf, q[1] / nf), g))
            .collect();
        let shift = lattice.vector(winding);
        polyline.push([polyline[0][0] + shift[0], polyline[0][1] + shift[1]]);
        let mut comp = LevelSetComponent {
            polyline,
            g,
            winding,
            orientation: 0,
        };
        orient_along_flow(av, &mut comp);
        if comp.contractible() {
            comp.orientation = if comp.signed_area() >= 0.0 { 1 } else { -1 };
        }
        components.push(comp);
    }
    Ok(components)
}

/// Newton projection onto {v̄ = g} along the gradient.
fn refine(av: &AveragedPotential, mut y: [f64; 2], g: f64) -> [f64; 2] {
    for _ in 0..8 {
        let (v, gr, _) = av.jet(y);
        let n2 = gr[0] * gr[0] + gr[1] * gr[1];
        if n2 == 0.0 {
            break;
        }
        let step = (v - g) / n2;
        y = [y[0] - step * gr[0], y[1] - step * gr[1]];
        if (v - g).abs() < 1e-15 * (1.0 + g.abs()) {
            break;
        }
    }
    y
}

fn orient_along_flow(av: &AveragedPotential, comp: &mut LevelSetComponent) {
    let pts = &comp.polyline;
    let m = pts.len();
    if m < 3 {
        return;
    }
    let mut score = 0.0;
    for k in 0..m - 1 {
        let gr = av.grad(pts[k]);
        let t = [pts[k + 1][0] - pts[k][0], pts[k + 1][1] - pts[k][1]];
        score += -gr[1] * t[0] + gr[0] * t[1];
    }
    if score < 0.0 {
        comp.polyline.reverse();
        comp.winding = (-comp.winding.0, -comp.winding.1);
    }
}
