//! Exact solution of the cop-and-killer game.
//!
//! The cop picks a start vertex, then the killer picks a different one, then
//! the players alternate moves with the cop first. Moves are forced: each move
//! goes to an adjacent vertex. Whoever moves onto the other player wins; if
//! neither ever does, the game is a stalemate.
//!
//! States are `(cop, killer, turn)` with `cop != killer`. They are labeled by
//! retrograde analysis: immediate captures are seeded, then labels propagate
//! backwards with per-state counters of unrefuted moves. Unresolved states are
//! stalemates.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{min_degree, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("vertex {0} is isolated; every player must always have a move")]
    IsolatedVertex(usize),
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("state {0:?} is not part of the table")]
    StateNotFound(State),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Turn {
    CopToMove,
    KillerToMove,
}

impl Turn {
    fn index(self) -> usize {
        match self {
            Turn::CopToMove => 0,
            Turn::KillerToMove => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct State {
    pub cop: usize,
    pub killer: usize,
    pub turn: Turn,
}

impl State {
    pub fn new(cop: usize, killer: usize, turn: Turn) -> Self {
        Self { cop, killer, turn }
    }
}

/// Game result without the distance, ordered by the cop's preference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    KillerWin,
    Stalemate,
    CopWin,
}

/// Label of a single state; won states carry the number of plies until the
/// capture under optimal play (fastest win, slowest loss).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StateLabel {
    CopWin { plies: u32 },
    KillerWin { plies: u32 },
    Stalemate,
}

impl StateLabel {
    pub fn verdict(self) -> Verdict {
        match self {
            StateLabel::CopWin { .. } => Verdict::CopWin,
            StateLabel::KillerWin { .. } => Verdict::KillerWin,
            StateLabel::Stalemate => Verdict::Stalemate,
        }
    }

    pub fn plies(self) -> Option<u32> {
        match self {
            StateLabel::CopWin { plies } | StateLabel::KillerWin { plies } => Some(plies),
            StateLabel::Stalemate => None,
        }
    }

    fn win_for(turn: Turn, plies: u32) -> Self {
        match turn {
            Turn::CopToMove => StateLabel::CopWin { plies },
            Turn::KillerToMove => StateLabel::KillerWin { plies },
        }
    }

    fn loss_for(turn: Turn, plies: u32) -> Self {
        match turn {
            Turn::CopToMove => StateLabel::KillerWin { plies },
            Turn::KillerToMove => StateLabel::CopWin { plies },
        }
    }

    /// Rank from the point of view of the player to move in `turn`:
    /// 2 = win, 1 = stalemate, 0 = loss.
    fn rank_for(self, turn: Turn) -> u8 {
        match (self, turn) {
            (StateLabel::Stalemate, _) => 1,
            (StateLabel::CopWin { .. }, Turn::CopToMove)
            | (StateLabel::KillerWin { .. }, Turn::KillerToMove) => 2,
            _ => 0,
        }
    }
}

/// Labels of every `(cop, killer, turn)` state of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTable {
    graph: Graph,
    labels: Vec<StateLabel>,
}

impl LabelTable {
    fn index(n: usize, cop: usize, killer: usize, turn: Turn) -> usize {
        (cop * n + killer) * 2 + turn.index()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    fn contains(&self, state: State) -> bool {
        let n = self.graph.order();
        state.cop < n && state.killer < n && state.cop != state.killer
    }

    pub fn get(&self, state: State) -> Result<StateLabel, SolveError> {
        if !self.contains(state) {
            return Err(SolveError::StateNotFound(state));
        }
        let n = self.graph.order();
        Ok(self.labels[Self::index(n, state.cop, state.killer, state.turn)])
    }

    pub fn label(&self, cop: usize, killer: usize, turn: Turn) -> StateLabel {
        self.get(State::new(cop, killer, turn))
            .unwrap_or_else(|e| panic!("{e}"))
    }

    /// Every state with its label, in index order.
    pub fn states(&self) -> impl Iterator<Item = (State, StateLabel)> + '_ {
        let n = self.graph.order();
        (0..n).flat_map(move |c| {
            (0..n).filter(move |&k| k != c).flat_map(move |k| {
                [Turn::CopToMove, Turn::KillerToMove]
                    .into_iter()
                    .map(move |t| (State::new(c, k, t), self.label(c, k, t)))
            })
        })
    }
}

fn check_graph(graph: &Graph) -> Result<(), SolveError> {
    if graph.order() == 0 {
        return Err(SolveError::EmptyGraph);
    }
    if min_degree(graph) == 0 {
        let v = (0..graph.order()).find(|&v| graph.degree(v) == 0).unwrap();
        return Err(SolveError::IsolatedVertex(v));
    }
    Ok(())
}

/// Label all states by retrograde analysis.
pub fn label_states(graph: &Graph) -> Result<LabelTable, SolveError> {
    check_graph(graph)?;
    let n = graph.order();
    let adjacent = adjacency_matrix(graph);
    let idx = |c: usize, k: usize, t: Turn| LabelTable::index(n, c, k, t);

    let mut labels: Vec<Option<StateLabel>> = vec![None; n * n * 2];
    let mut remaining = vec![0u32; n * n * 2];
    let mut queue = VecDeque::new();

    for c in 0..n {
        for k in (0..n).filter(|&k| k != c) {
            let state = idx(c, k, Turn::CopToMove);
            if adjacent[c * n + k] {
                labels[state] = Some(StateLabel::CopWin { plies: 1 });
                queue.push_back((c, k, Turn::CopToMove));
            } else {
                remaining[state] = graph.degree(c) as u32;
            }
            let state = idx(c, k, Turn::KillerToMove);
            if adjacent[c * n + k] {
                labels[state] = Some(StateLabel::KillerWin { plies: 1 });
                queue.push_back((c, k, Turn::KillerToMove));
            } else {
                remaining[state] = graph.degree(k) as u32;
            }
        }
    }

    while let Some((c, k, turn)) = queue.pop_front() {
        let label = labels[idx(c, k, turn)].unwrap();
        let plies = label.plies().unwrap() + 1;
        // The predecessor was moved by the other player.
        let (mover_turn, movers_from): (Turn, &[usize]) = match turn {
            Turn::KillerToMove => (Turn::CopToMove, graph.neighbors(c)),
            Turn::CopToMove => (Turn::KillerToMove, graph.neighbors(k)),
        };
        for &prev in movers_from {
            let (pc, pk) = match mover_turn {
                Turn::CopToMove => (prev, k),
                Turn::KillerToMove => (c, prev),
            };
            if pc == pk {
                continue;
            }
            let p = idx(pc, pk, mover_turn);
            if labels[p].is_some() {
                continue;
            }
            if label.rank_for(mover_turn) == 2 {
                labels[p] = Some(StateLabel::win_for(mover_turn, plies));
                queue.push_back((pc, pk, mover_turn));
            } else {
                remaining[p] -= 1;
                if remaining[p] == 0 {
                    labels[p] = Some(StateLabel::loss_for(mover_turn, plies));
                    queue.push_back((pc, pk, mover_turn));
                }
            }
        }
    }

    Ok(LabelTable {
        graph: graph.clone(),
        labels: labels
            .into_iter()
            .map(|l| l.unwrap_or(StateLabel::Stalemate))
            .collect(),
    })
}

fn adjacency_matrix(graph: &Graph) -> Vec<bool> {
    let n = graph.order();
    let mut m = vec![false; n * n];
    for (u, v) in graph.edges() {
        m[u * n + v] = true;
        m[v * n + u] = true;
    }
    m
}

/// Successor of a non-capturing move, or `None` when the move captures.
fn successor(state: State, to: usize) -> Option<State> {
    match state.turn {
        Turn::CopToMove => (to != state.killer).then(|| State::new(to, state.killer, Turn::KillerToMove)),
        Turn::KillerToMove => (to != state.cop).then(|| State::new(state.cop, to, Turn::CopToMove)),
    }
}

fn mover_position(state: State) -> usize {
    match state.turn {
        Turn::CopToMove => state.cop,
        Turn::KillerToMove => state.killer,
    }
}

/// Independent oracle: synchronous label updates from an all-unknown table
/// until nothing changes.
pub fn label_states_fixpoint(graph: &Graph) -> Result<LabelTable, SolveError> {
    check_graph(graph)?;
    let n = graph.order();
    let idx = |s: State| LabelTable::index(n, s.cop, s.killer, s.turn);
    let mut labels: Vec<Option<StateLabel>> = vec![None; n * n * 2];
    let max_rounds = n * n * 2 + 1;

    for _ in 0..max_rounds {
        let mut next = labels.clone();
        let mut changed = false;
        for c in 0..n {
            for k in (0..n).filter(|&k| k != c) {
                for turn in [Turn::CopToMove, Turn::KillerToMove] {
                    let state = State::new(c, k, turn);
                    let mut best_win: Option<u32> = None;
                    let mut worst_loss: Option<u32> = Some(0);
                    for &to in graph.neighbors(mover_position(state)) {
                        let child = match successor(state, to) {
                            None => Some((2, 0)),
                            Some(s) => labels[idx(s)].map(|l| (l.rank_for(turn), l.plies().unwrap_or(0))),
                        };
                        match child {
                            Some((2, p)) => best_win = Some(best_win.map_or(p, |b| b.min(p))),
                            Some((0, p)) => worst_loss = worst_loss.map(|w| w.max(p)),
                            _ => worst_loss = None,
                        }
                    }
                    let label = match (best_win, worst_loss) {
                        (Some(p), _) => Some(StateLabel::win_for(turn, p + 1)),
                        (None, Some(p)) => Some(StateLabel::loss_for(turn, p + 1)),
                        (None, None) => None,
                    };
                    if label != labels[idx(state)] {
                        changed = true;
                        next[idx(state)] = label;
                    }
                }
            }
        }
        labels = next;
        if !changed {
            break;
        }
    }

    Ok(LabelTable {
        graph: graph.clone(),
        labels: labels
            .into_iter()
            .map(|l| l.unwrap_or(StateLabel::Stalemate))
            .collect(),
    })
}

/// A move realizing the state's label for the player to move.
///
/// Preference is win, then stalemate, then loss; wins are taken as fast as
/// possible and losses delayed as long as possible; remaining ties go to the
/// lowest vertex.
pub fn optimal_move(table: &LabelTable, state: State) -> Result<usize, SolveError> {
    table.get(state)?;
    let mut best: Option<(u8, i64, usize)> = None;
    for &to in table.graph.neighbors(mover_position(state)) {
        let (rank, plies) = match successor(state, to) {
            None => (2, 0),
            Some(s) => {
                let l = table.get(s)?;
                (l.rank_for(state.turn), l.plies().unwrap_or(0) as i64)
            }
        };
        // Higher key is better: fast wins, slow losses.
        let key = (rank, if rank == 2 { -plies } else { plies });
        let better = match best {
            None => true,
            Some((r, p, _)) => key > (r, p),
        };
        if better {
            best = Some((key.0, key.1, to));
        }
    }
    Ok(best.expect("min degree >= 1 guarantees a move").2)
}

/// One move of a witness strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessMove {
    pub state: State,
    pub to: usize,
}

/// Whole-game result under optimal placement and play.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: StateLabel,
    pub cop_start: usize,
    pub killer_reply: usize,
    /// Moves of the side the verdict favors (both sides for a stalemate) in
    /// every state reachable from the opening when that side follows these
    /// moves and the opponent plays arbitrarily.
    pub witness: Vec<WitnessMove>,
    pub table: LabelTable,
}

/// Solves the whole game: the cop picks the start maximizing her result, the
/// killer picks the reply minimizing it, ties to the lowest vertex.
pub fn solve(graph: &Graph) -> Result<Outcome, SolveError> {
    let table = label_states(graph)?;
    let n = graph.order();
    let mut best: Option<(Verdict, usize, usize)> = None;
    for c in 0..n {
        let mut reply: Option<(Verdict, usize)> = None;
        for k in (0..n).filter(|&k| k != c) {
            let v = table.label(c, k, Turn::CopToMove).verdict();
            if reply.is_none_or(|(r, _)| v < r) {
                reply = Some((v, k));
            }
        }
        // n >= 2 because min degree >= 1
        let (v, k) = reply.unwrap();
        if best.is_none_or(|(b, _, _)| v > b) {
            best = Some((v, c, k));
        }
    }
    let (_, cop_start, killer_reply) = best.unwrap();
    let verdict = table.label(cop_start, killer_reply, Turn::CopToMove);
    let witness = witness_strategy(&table, State::new(cop_start, killer_reply, Turn::CopToMove))?;
    Ok(Outcome {
        verdict,
        cop_start,
        killer_reply,
        witness,
        table,
    })
}

fn witness_strategy(table: &LabelTable, start: State) -> Result<Vec<WitnessMove>, SolveError> {
    let n = table.graph.order();
    let verdict = table.get(start)?.verdict();
    let favored = |turn: Turn| match verdict {
        Verdict::CopWin => turn == Turn::CopToMove,
        Verdict::KillerWin => turn == Turn::KillerToMove,
        Verdict::Stalemate => true,
    };
    let mut seen = vec![false; n * n * 2];
    let mut stack = vec![start];
    seen[LabelTable::index(n, start.cop, start.killer, start.turn)] = true;
    let mut moves = Vec::new();
    while let Some(state) = stack.pop() {
        let targets: Vec<usize> = if favored(state.turn) {
            let to = optimal_move(table, state)?;
            moves.push(WitnessMove { state, to });
            vec![to]
        } else {
            table.graph.neighbors(mover_position(state)).to_vec()
        };
        for to in targets {
            if let Some(next) = successor(state, to) {
                let i = LabelTable::index(n, next.cop, next.killer, next.turn);
                if !seen[i] {
                    seen[i] = true;
                    stack.push(next);
                }
            }
        }
    }
    moves.sort_by_key(|m| LabelTable::index(n, m.state.cop, m.state.killer, m.state.turn));
    Ok(moves)
}

/// Verdict only; convenience for experiments.
pub fn verdict(graph: &Graph) -> Result<Verdict, SolveError> {
    Ok(solve(graph)?.verdict.verdict())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    fn family(spec: FamilySpec) -> Graph {
        generate(spec).unwrap()
    }

    #[test]
    fn four_cycle_labels() {
        let table = label_states(&family(FamilySpec::Cycle(4))).unwrap();
        assert_eq!(table.label(0, 2, Turn::CopToMove).verdict(), Verdict::KillerWin);
        assert_eq!(table.label(0, 2, Turn::CopToMove), StateLabel::KillerWin { plies: 2 });
        assert_eq!(table.label(0, 2, Turn::KillerToMove), StateLabel::CopWin { plies: 2 });
    }

    #[test]
    fn triangle_is_immediate() {
        let table = label_states(&family(FamilySpec::Cycle(3))).unwrap();
        for c in 0..3 {
            for k in (0..3).filter(|&k| k != c) {
                assert_eq!(table.label(c, k, Turn::CopToMove), StateLabel::CopWin { plies: 1 });
            }
        }
    }

    #[test]
    fn six_cycle_antipodal_is_stalemate() {
        let table = label_states(&family(FamilySpec::Cycle(6))).unwrap();
        assert_eq!(table.label(0, 3, Turn::CopToMove), StateLabel::Stalemate);
        let to = optimal_move(&table, State::new(0, 3, Turn::CopToMove)).unwrap();
        let next = table.label(to, 3, Turn::KillerToMove);
        assert_eq!(next, StateLabel::Stalemate);
    }

    #[test]
    fn optimal_move_examples() {
        let k3 = label_states(&family(FamilySpec::Complete(3))).unwrap();
        assert_eq!(optimal_move(&k3, State::new(0, 1, Turn::CopToMove)).unwrap(), 1);
        let c4 = label_states(&family(FamilySpec::Cycle(4))).unwrap();
        assert_eq!(optimal_move(&c4, State::new(0, 2, Turn::KillerToMove)).unwrap(), 1);
        assert_eq!(
            optimal_move(&c4, State::new(1, 1, Turn::CopToMove)),
            Err(SolveError::StateNotFound(State::new(1, 1, Turn::CopToMove)))
        );
        assert!(optimal_move(&c4, State::new(0, 9, Turn::CopToMove)).is_err());
    }

    #[test]
    fn small_verdicts() {
        assert_eq!(verdict(&family(FamilySpec::Cycle(3))).unwrap(), Verdict::CopWin);
        assert_eq!(verdict(&family(FamilySpec::Cycle(4))).unwrap(), Verdict::KillerWin);
        assert_eq!(verdict(&family(FamilySpec::Cycle(5))).unwrap(), Verdict::Stalemate);
        assert_eq!(verdict(&family(FamilySpec::Grid(2, 3))).unwrap(), Verdict::KillerWin);
        assert_eq!(verdict(&family(FamilySpec::King(4, 4))).unwrap(), Verdict::Stalemate);
        assert_eq!(verdict(&family(FamilySpec::PentagonPlus)).unwrap(), Verdict::KillerWin);
        assert_eq!(verdict(&family(FamilySpec::Path(2))).unwrap(), Verdict::CopWin);
    }

    #[test]
    fn rejects_isolated_vertices() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(label_states(&g).unwrap_err(), SolveError::IsolatedVertex(2));
        assert_eq!(solve(&g).unwrap_err(), SolveError::IsolatedVertex(2));
        assert_eq!(label_states_fixpoint(&g).unwrap_err(), SolveError::IsolatedVertex(2));
        assert_eq!(solve(&Graph::empty(0)).unwrap_err(), SolveError::EmptyGraph);
    }

    #[test]
    fn oracle_agrees_on_c4() {
        let g = family(FamilySpec::Cycle(4));
        assert_eq!(label_states(&g).unwrap(), label_states_fixpoint(&g).unwrap());
    }

    #[test]
    fn witness_follows_labels() {
        let outcome = solve(&family(FamilySpec::Cycle(4))).unwrap();
        assert_eq!(outcome.verdict.verdict(), Verdict::KillerWin);
        assert!(!outcome.witness.is_empty());
        for m in &outcome.witness {
            assert_eq!(m.state.turn, Turn::KillerToMove);
            assert_eq!(outcome.table.get(m.state).unwrap().verdict(), Verdict::KillerWin);
        }
    }
}
