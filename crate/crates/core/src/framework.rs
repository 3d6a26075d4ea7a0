//! Generalized shortest-path update framework.
//!
//! A rule assigns every state a fallback value `J(s)` (stay put) and a move
//! value `H(s, u, T(u))` for each neighbor `u`; the solution is the fixpoint
//!
//! ```text
//! T(s) = opt( J(s), opt_{u ∈ N(s)} H(s, u, T(u)) )
//! ```
//!
//! with `opt` = min or max. Three solvers are provided: best-first settling
//! (a generalized Dijkstra), synchronous relaxation rounds (a generalized
//! Bellman-Ford) and plain value iteration, which serves as a numerical
//! oracle for the other two.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

/// A real value or an infinity. `+∞` absorbs addition and multiplication by
/// positive reals; see [`scale`] for the zero coefficient case.
pub type ExtendedValue = f64;

/// Absolute tolerance for value comparisons inside the solvers.
pub const VALUE_TOL: f64 = 1e-12;

/// `coefficient * value` with `0 * ∞ = 0`.
pub fn scale(coefficient: f64, value: ExtendedValue) -> ExtendedValue {
    if coefficient == 0.0 {
        0.0
    } else {
        coefficient * value
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameworkError {
    #[error("the state space is empty")]
    EmptyStateSpace,
    #[error("rule violates the best-first settling condition at state {state}; use relaxation")]
    NotMonotone { state: usize },
    #[error("no fixpoint after {rounds} relaxation rounds; the update equation is ill-posed")]
    IllPosed { rounds: usize },
    #[error("value iteration did not converge in {iterations} iterations (last change {last_change})")]
    NoConvergence { iterations: usize, last_change: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("no action at state {state} reproduces its value")]
    NoPolicy { state: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// `candidate` beats `current` by more than the tolerance.
    pub fn improves(self, candidate: f64, current: f64) -> bool {
        if candidate.is_nan() || candidate == current {
            return false;
        }
        if current.is_nan() {
            return true;
        }
        match self {
            Direction::Minimize => candidate < current - VALUE_TOL,
            Direction::Maximize => candidate > current + VALUE_TOL,
        }
    }

    fn pick(self, a: f64, b: f64) -> f64 {
        if self.improves(b, a) {
            b
        } else {
            a
        }
    }
}

/// `a` and `b` differ by more than the tolerance (infinities compare exactly).
pub fn differs(a: f64, b: f64) -> bool {
    if a == b {
        return false;
    }
    if !a.is_finite() || !b.is_finite() {
        return true;
    }
    (a - b).abs() > VALUE_TOL
}

/// Abstract state space: dense state ids with per-edge payloads.
pub trait NeighborOracle: Sync {
    type Payload: Clone;

    fn state_count(&self) -> usize;

    /// Calls `visit(neighbor, payload)` for every move out of `state`, in a
    /// deterministic order.
    fn visit_neighbors(&self, state: usize, visit: &mut dyn FnMut(usize, &Self::Payload));
}

impl NeighborOracle for Graph {
    type Payload = ();

    fn state_count(&self) -> usize {
        self.order()
    }

    fn visit_neighbors(&self, state: usize, visit: &mut dyn FnMut(usize, &())) {
        for &u in self.neighbors(state) {
            visit(u, &());
        }
    }
}

/// The `(direction, J, H)` triple. `H` must be non-decreasing in
/// `neighbor_value`.
pub trait UpdateRule<P> {
    fn direction(&self) -> Direction;

    /// `J(state)`: value of staying.
    fn stay_value(&self, state: usize) -> ExtendedValue;

    /// `H(state, neighbor)` given the neighbor's current value.
    fn move_value(&self, state: usize, neighbor: usize, neighbor_value: ExtendedValue, payload: &P)
        -> ExtendedValue;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Action {
    Stay,
    MoveTo(usize),
}

/// Fixpoint values with the action attaining each of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValuePolicy {
    pub values: Vec<ExtendedValue>,
    pub actions: Vec<Action>,
}

impl ValuePolicy {
    /// States visited from `start` by following `MoveTo` actions, ending at a
    /// `Stay` state. `None` if the actions cycle.
    pub fn chain(&self, start: usize) -> Option<Vec<usize>> {
        let mut path = vec![start];
        let mut current = start;
        while let Action::MoveTo(next) = self.actions[current] {
            if path.len() > self.actions.len() {
                return None;
            }
            path.push(next);
            current = next;
        }
        Some(path)
    }
}

/// Applies the update equation once at `state`.
pub fn update<O, R>(oracle: &O, rule: &R, values: &[f64], state: usize) -> f64
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
{
    let direction = rule.direction();
    let mut best = rule.stay_value(state);
    oracle.visit_neighbors(state, &mut |u, payload| {
        best = direction.pick(best, rule.move_value(state, u, values[u], payload));
    });
    best
}

/// Largest change produced by re-applying the update equation to `values`.
pub fn max_residual<O, R>(oracle: &O, rule: &R, values: &[f64]) -> f64
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
{
    (0..oracle.state_count())
        .map(|s| {
            let v = update(oracle, rule, values, s);
            if v == values[s] {
                0.0
            } else {
                (v - values[s]).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Reverse adjacency in compressed form: for each state, the states that can
/// move into it together with the payload of that move.
struct Predecessors<P> {
    offsets: Vec<usize>,
    entries: Vec<(usize, P)>,
}

impl<P: Clone> Predecessors<P> {
    fn build<O: NeighborOracle<Payload = P>>(oracle: &O) -> Self {
        let n = oracle.state_count();
        let mut forward = Vec::new();
        for s in 0..n {
            oracle.visit_neighbors(s, &mut |u, p| forward.push((u, s, p.clone())));
        }
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in &forward {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut slots: Vec<Option<(usize, P)>> = vec![None; forward.len()];
        for (u, s, p) in forward {
            slots[cursor[u]] = Some((s, p));
            cursor[u] += 1;
        }
        Self {
            offsets,
            entries: slots.into_iter().map(Option::unwrap).collect(),
        }
    }

    fn of(&self, state: usize) -> &[(usize, P)] {
        &self.entries[self.offsets[state]..self.offsets[state + 1]]
    }
}

struct HeapEntry {
    value: f64,
    state: usize,
    direction: Direction,
}

impl HeapEntry {
    fn cmp_key(&self, other: &Self) -> Ordering {
        let by_value = match self.direction {
            Direction::Minimize => other.value.total_cmp(&self.value),
            Direction::Maximize => self.value.total_cmp(&other.value),
        };
        by_value.then_with(|| other.state.cmp(&self.state))
    }
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_key(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key(other)
    }
}

/// Best-first settling (generalized Dijkstra).
///
/// States are settled in order of value, best first, ties by state id. The
/// settling condition is checked while running (settled values must never
/// improve on an earlier settled value) and the result is verified to be a
/// fixpoint; either failure is reported as [`FrameworkError::NotMonotone`].
pub fn solve_priority<O, R>(oracle: &O, rule: &R) -> Result<ValuePolicy, FrameworkError>
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
{
    let n = oracle.state_count();
    if n == 0 {
        return Err(FrameworkError::EmptyStateSpace);
    }
    let direction = rule.direction();
    let preds = Predecessors::build(oracle);
    let mut tentative: Vec<f64> = (0..n).map(|s| rule.stay_value(s)).collect();
    let mut settled = vec![false; n];
    let mut heap: BinaryHeap<HeapEntry> = tentative
        .iter()
        .enumerate()
        .map(|(state, &value)| HeapEntry { value, state, direction })
        .collect();
    let mut last: Option<f64> = None;

    while let Some(HeapEntry { value, state, .. }) = heap.pop() {
        if settled[state] || value.to_bits() != tentative[state].to_bits() {
            continue;
        }
        if let Some(previous) = last {
            if direction.improves(value, previous) {
                return Err(FrameworkError::NotMonotone { state });
            }
        }
        last = Some(value);
        settled[state] = true;
        for (w, payload) in preds.of(state) {
            if settled[*w] {
                continue;
            }
            let candidate = rule.move_value(*w, state, value, payload);
            if direction.improves(candidate, tentative[*w]) {
                tentative[*w] = candidate;
                heap.push(HeapEntry { value: candidate, state: *w, direction });
            }
        }
    }

    for s in 0..n {
        if differs(update(oracle, rule, &tentative, s), tentative[s]) {
            return Err(FrameworkError::NotMonotone { state: s });
        }
    }
    let actions = extract_with(oracle, rule, &tentative, &preds, |_, candidates| candidates[0])?;
    Ok(ValuePolicy {
        values: tentative,
        actions,
    })
}

/// Synchronous relaxation rounds (generalized Bellman-Ford). A round that
/// still changes some value after `state_count` rounds means there is no
/// well-defined fixpoint.
pub fn solve_relaxation<O, R>(oracle: &O, rule: &R) -> Result<ValuePolicy, FrameworkError>
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
{
    let n = oracle.state_count();
    if n == 0 {
        return Err(FrameworkError::EmptyStateSpace);
    }
    let mut values: Vec<f64> = (0..n).map(|s| rule.stay_value(s)).collect();
    for _ in 0..n {
        let next: Vec<f64> = (0..n).map(|s| update(oracle, rule, &values, s)).collect();
        let changed = next.iter().zip(&values).any(|(&a, &b)| differs(a, b));
        values = next;
        if !changed {
            let preds = Predecessors::build(oracle);
            let actions = extract_with(oracle, rule, &values, &preds, |_, c| c[0])?;
            return Ok(ValuePolicy { values, actions });
        }
    }
    Err(FrameworkError::IllPosed { rounds: n })
}

/// In-place (Gauss-Seidel) iteration of the update equation starting from
/// `J`, until the largest change in a sweep is at most `tol`.
pub fn value_iteration<O, R>(
    oracle: &O,
    rule: &R,
    tol: f64,
    max_iters: usize,
) -> Result<Vec<f64>, FrameworkError>
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FrameworkError::InvalidTolerance(tol));
    }
    let n = oracle.state_count();
    if n == 0 {
        return Err(FrameworkError::EmptyStateSpace);
    }
    let mut values: Vec<f64> = (0..n).map(|s| rule.stay_value(s)).collect();
    let mut last_change = f64::INFINITY;
    for _ in 0..max_iters {
        last_change = 0.0;
        for s in 0..n {
            let next = update(oracle, rule, &values, s);
            let change = if next == values[s] {
                0.0
            } else {
                (next - values[s]).abs()
            };
            last_change = f64::max(last_change, if change.is_nan() { f64::INFINITY } else { change });
            values[s] = next;
        }
        if last_change <= tol {
            return Ok(values);
        }
    }
    Err(FrameworkError::NoConvergence {
        iterations: max_iters,
        last_change,
    })
}

/// Derives actions from fixpoint values with a default tie-break: `Stay`
/// whenever `J` attains the value, otherwise the lowest-id neighbor whose
/// move attains it.
pub fn extract_policy<O, R>(oracle: &O, rule: &R, values: &[f64]) -> Result<Vec<Action>, FrameworkError>
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
{
    extract_policy_with(oracle, rule, values, |_, c| c[0])
}

/// Like [`extract_policy`], with `choose(state, candidates)` picking among the
/// neighbors (ascending ids) whose move attains the state's value.
///
/// Actions are assigned in layers outward from the `Stay` states; a state may
/// only move to a state resolved in an earlier layer, so following actions
/// always ends at a `Stay`.
pub fn extract_policy_with<O, R, F>(
    oracle: &O,
    rule: &R,
    values: &[f64],
    choose: F,
) -> Result<Vec<Action>, FrameworkError>
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
    F: FnMut(usize, &[usize]) -> usize,
{
    let preds = Predecessors::build(oracle);
    extract_with(oracle, rule, values, &preds, choose)
}

fn extract_with<O, R, F>(
    oracle: &O,
    rule: &R,
    values: &[f64],
    preds: &Predecessors<O::Payload>,
    mut choose: F,
) -> Result<Vec<Action>, FrameworkError>
where
    O: NeighborOracle,
    R: UpdateRule<O::Payload>,
    F: FnMut(usize, &[usize]) -> usize,
{
    let n = oracle.state_count();
    const UNRESOLVED: usize = usize::MAX;
    let mut layer_of = vec![UNRESOLVED; n];
    let mut actions = vec![Action::Stay; n];
    let mut frontier: Vec<usize> = (0..n)
        .filter(|&s| !differs(rule.stay_value(s), values[s]))
        .collect();
    for &s in &frontier {
        layer_of[s] = 0;
    }
    let mut queued = vec![usize::MAX; n];
    let mut layer = 0;
    let mut candidates = Vec::new();
    while !frontier.is_empty() {
        layer += 1;
        let mut pending: Vec<usize> = Vec::new();
        for &s in &frontier {
            for (w, _) in preds.of(s) {
                if layer_of[*w] == UNRESOLVED && queued[*w] != layer {
                    queued[*w] = layer;
                    pending.push(*w);
                }
            }
        }
        pending.sort_unstable();
        let mut next = Vec::new();
        for w in pending {
            candidates.clear();
            oracle.visit_neighbors(w, &mut |u, payload| {
                if layer_of[u] < layer && !differs(rule.move_value(w, u, values[u], payload), values[w]) {
                    candidates.push(u);
                }
            });
            if candidates.is_empty() {
                continue;
            }
            candidates.sort_unstable();
            candidates.dedup();
            let target = choose(w, &candidates);
            actions[w] = Action::MoveTo(target);
            next.push(w);
        }
        for &w in &next {
            layer_of[w] = layer;
        }
        frontier = next;
    }
    match layer_of.iter().position(|&l| l == UNRESOLVED) {
        Some(state) => Err(FrameworkError::NoPolicy { state }),
        None => Ok(actions),
    }
}
