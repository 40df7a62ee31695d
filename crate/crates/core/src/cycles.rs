//! Graph routines over successor lists: strongly connected components,
//! elementary circuits (Johnson's algorithm) and the maximal subgraph in
//! which every vertex keeps an incoming and an outgoing edge.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Strongly connected components of the subgraph induced by the vertices
/// `v >= min_vertex`. Returns a component id per vertex (`usize::MAX` for
/// excluded vertices) and the number of components.
pub fn scc(succ: &[Vec<u32>], min_vertex: usize) -> (Vec<usize>, usize) {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut ncomp = 0usize;
    // (vertex, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in min_vertex..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos] as usize;
                *pos += 1;
                if w < min_vertex {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

/// All elementary circuits of the digraph, each listed once starting from its
/// least vertex. Circuits are returned in the order Johnson's search finds
/// them. Fails closed when more than `cap` circuits exist.
pub fn simple_cycles(succ: &[Vec<u32>], cap: usize) -> Result<Vec<Vec<u32>>> {
    let n = succ.len();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut blocked = vec![false; n];
    let mut bsets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    let mut in_comp = vec![false; n];

    let mut s = 0usize;
    while s < n {
        let (comp, ncomp) = scc(succ, s);
        // least vertex of each component and whether it carries a cycle
        let mut least = vec![usize::MAX; ncomp];
        let mut size = vec![0usize; ncomp];
        for v in s..n {
            let c = comp[v];
            if c != usize::MAX {
                size[c] += 1;
                if v < least[c] {
                    least[c] = v;
                }
            }
        }
        let mut start = usize::MAX;
        for v in s..n {
            let c = comp[v];
            if c == usize::MAX || least[c] != v {
                continue;
            }
            let nontrivial = size[c] > 1 || succ[v].iter().any(|&w| w as usize == v);
            if nontrivial {
                start = v;
                break;
            }
        }
        if start == usize::MAX {
            break;
        }
        let c = comp[start];
        for v in start..n {
            in_comp[v] = comp[v] == c;
            if in_comp[v] {
                blocked[v] = false;
                bsets[v].clear();
            }
        }

        circuits_from(start, succ, &in_comp, &mut blocked, &mut bsets, &mut out, cap)?;

        for flag in in_comp.iter_mut() {
            *flag = false;
        }
        s = start + 1;
    }
    Ok(out)
}

fn unblock(u: usize, blocked: &mut [bool], bsets: &mut [BTreeSet<u32>]) {
    let mut work = vec![u];
    while let Some(x) = work.pop() {
        if !blocked[x] {
            continue;
        }
        blocked[x] = false;
        let pending = core::mem::take(&mut bsets[x]);
        for w in pending {
            if blocked[w as usize] {
                work.push(w as usize);
            }
        }
    }
}

fn circuits_from(
    s: usize,
    succ: &[Vec<u32>],
    in_comp: &[bool],
    blocked: &mut [bool],
    bsets: &mut [BTreeSet<u32>],
    out: &mut Vec<Vec<u32>>,
    cap: usize,
) -> Result<()> {
    struct Frame {
        v: usize,
        pos: usize,
        found: bool,
    }
    let mut path: Vec<u32> = vec![s as u32];
    let mut frames = vec![Frame {
        v: s,
        pos: 0,
        found: false,
    }];
    blocked[s] = true;

    while let Some(top) = frames.last_mut() {
        let v = top.v;
        if top.pos < succ[v].len() {
            let w = succ[v][top.pos] as usize;
            top.pos += 1;
            if !in_comp[w] {
                continue;
            }
            if w == s {
                if out.len() >= cap {
                    return Err(Error::CycleCapExceeded { cap });
                }
                out.push(path.clone());
                top.found = true;
            } else if !blocked[w] {
                blocked[w] = true;
                path.push(w as u32);
                frames.push(Frame {
                    v: w,
                    pos: 0,
                    found: false,
                });
            }
        } else {
            let found = top.found;
            if found {
                unblock(v, blocked, bsets);
            } else {
                for &w in &succ[v] {
                    if in_comp[w as usize] {
                        bsets[w as usize].insert(v as u32);
                    }
                }
            }
            frames.pop();
            path.pop();
            if let Some(parent) = frames.last_mut() {
                parent.found |= found;
            }
        }
    }
    Ok(())
}

/// Iteratively removes vertices without an outgoing or incoming edge inside
/// the kept set. `adj` is indexed by local vertex ids; the surviving ids are
/// returned in increasing order.
pub fn invariant_core(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    let mut alive = vec![true; n];
    let mut outdeg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut indeg = vec![0usize; n];
    let mut pred: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (v, a) in adj.iter().enumerate() {
        for &w in a {
            indeg[w as usize] += 1;
            pred[w as usize].push(v as u32);
        }
    }
    let mut work: Vec<usize> = (0..n).filter(|&v| outdeg[v] == 0 || indeg[v] == 0).collect();
    while let Some(v) = work.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &adj[v] {
            let w = w as usize;
            if alive[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    work.push(w);
                }
            }
        }
        for &u in &pred[v] {
            let u = u as usize;
            if alive[u] {
                outdeg[u] -= 1;
                if outdeg[u] == 0 {
                    work.push(u);
                }
            }
        }
    }
    (0..n as u32).filter(|&v| alive[v as usize]).collect()
}

/// Maximum mean cycle of a vertex-weighted digraph in which every vertex has
/// a successor, by Howard's policy iteration. Returns the mean and one
/// optimal circuit.
pub fn max_cycle_mean(succ: &[Vec<u32>], weight: &[f64]) -> Result<(f64, Vec<u32>)> {
    let n = succ.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if succ.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidArgument("every vertex needs a successor"));
    }
    let scale = weight.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-300);
    let eps = 1e-13 * scale;
    let mut policy: Vec<u32> = succ
        .iter()
        .map(|s| {
            *s.iter()
                .max_by(|&&a, &&b| {
                    weight[a as usize]
                        .partial_cmp(&weight[b as usize])
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .unwrap_or(&s[0])
        })
        .collect();
    let mut eta = vec![0.0; n];
    let mut bias = vec![0.0; n];
    let max_rounds = 10 * n + 1000;
    for _ in 0..max_rounds {
        evaluate_policy(&policy, weight, &mut eta, &mut bias);
        let mut changed = false;
        for v in 0..n {
            let cur = policy[v] as usize;
            let mut best = cur;
            for &s in &succ[v] {
                if eta[s as usize] > eta[best] + eps {
                    best = s as usize;
                }
            }
            if best != cur {
                policy[v] = best as u32;
                changed = true;
            }
        }
        if !changed {
            for v in 0..n {
                let cur = policy[v] as usize;
                let mut best = cur;
                let mut best_val = bias[cur];
                for &s in &succ[v] {
                    let s = s as usize;
                    if (eta[s] - eta[v]).abs() <= eps && bias[s] > best_val + eps {
                        best = s;
                        best_val = bias[s];
                    }
                }
                if best != cur {
                    policy[v] = best as u32;
                    changed = true;
                }
            }
        }
        if !changed {
            let start = (0..n)
                .max_by(|&a, &b| eta[a].partial_cmp(&eta[b]).unwrap_or(core::cmp::Ordering::Equal))
                .unwrap_or(0);
            let cycle = policy_cycle(&policy, start);
            let mean = cycle.iter().map(|&v| weight[v as usize]).sum::<f64>() / cycle.len() as f64;
            return Ok((mean, cycle));
        }
    }
    Err(Error::Divergence("policy iteration did not settle"))
}

fn policy_cycle(policy: &[u32], start: usize) -> Vec<u32> {
    let n = policy.len();
    let mut seen = vec![usize::MAX; n];
    let mut v = start;
    let mut step = 0;
    while seen[v] == usize::MAX {
        seen[v] = step;
        step += 1;
        v = policy[v] as usize;
    }
    let mut cycle = vec![v as u32];
    let mut u = policy[v] as usize;
    while u != v {
        cycle.push(u as u32);
        u = policy[u] as usize;
    }
    cycle
}

/// Cycle means and relative values of a fixed policy.
fn evaluate_policy(policy: &[u32], weight: &[f64], eta: &mut [f64], bias: &mut [f64]) {
    let n = policy.len();
    // 0 unvisited, 1 on the current walk, 2 done
    let mut state = vec![0u8; n];
    let mut walk: Vec<usize> = Vec::new();
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        walk.clear();
        let mut v = root;
        while state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            v = policy[v] as usize;
        }
        if state[v] == 1 {
            // new circuit through v
            let pos = walk.iter().position(|&x| x == v).unwrap_or(0);
            let cyc = &walk[pos..];
            let mean = cyc.iter().map(|&u| weight[u]).sum::<f64>() / cyc.len() as f64;
            bias[v] = 0.0;
            eta[v] = mean;
            for &u in cyc[1..].iter().rev() {
                eta[u] = mean;
                bias[u] = weight[u] - mean + bias[policy[u] as usize];
            }
            state[v] = 2;
            for &u in &cyc[1..] {
                state[u] = 2;
            }
            walk.truncate(pos);
        }
        for &u in walk.iter().rev() {
            let nx = policy[u] as usize;
            eta[u] = eta[nx];
            bias[u] = weight[u] - eta[u] + bias[nx];
            state[u] = 2;
        }
    }
}
