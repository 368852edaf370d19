//! Backtracking over normal-edge directions with forced-move propagation.
//!
//! A vertex whose residual outdegree is zero takes all its undecided edges
//! inwards; one whose residual equals its undecided edge count sends them
//! all out. Branching happens on the vertex with the fewest choices.

use std::time::Instant;

use crate::{Error, Result};

/// Recursion depth below which both branches run as separate rayon tasks.
const PARALLEL_DEPTH: u32 = 8;
const DEADLINE_POLL: u32 = 1 << 10;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Control {
    pub deadline: Option<Instant>,
    pub parallel: bool,
}

pub(crate) struct Instance {
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct State {
    /// 0 undecided, 1 out of `ends.0`, 2 out of `ends.1`
    dir: Vec<u8>,
    need: Vec<i64>,
    open: Vec<i64>,
}

impl Instance {
    pub fn new(n: usize, ends: Vec<(usize, usize)>) -> Self {
        let mut incident = vec![Vec::new(); n];
        for (id, &(a, b)) in ends.iter().enumerate() {
            incident[a].push(id);
            incident[b].push(id);
        }
        Self { ends, incident }
    }

    /// Number of orientations in which vertex `v` has exactly `need[v]`
    /// outgoing normal edges.
    pub fn count(&self, need: Vec<i64>, ctl: Control) -> Result<u128> {
        if ctl.deadline.is_some_and(|t| Instant::now() >= t) {
            return Err(Error::Timeout);
        }
        let open: Vec<i64> = self.incident.iter().map(|e| e.len() as i64).collect();
        let mut state = State { dir: vec![0; self.ends.len()], need, open };
        let mut queue: Vec<usize> = (0..self.incident.len()).collect();
        if !self.propagate(&mut state, &mut queue) {
            return Ok(0);
        }
        let mut ticks = 0;
        self.search(state, 0, ctl, &mut ticks)
    }

    fn orient(&self, s: &mut State, e: usize, tail: usize) -> usize {
        let (a, b) = self.ends[e];
        s.dir[e] = if tail == a { 1 } else { 2 };
        s.need[tail] -= 1;
        s.open[a] -= 1;
        s.open[b] -= 1;
        if tail == a {
            b
        } else {
            a
        }
    }

    fn propagate(&self, s: &mut State, queue: &mut Vec<usize>) -> bool {
        while let Some(v) = queue.pop() {
            if s.need[v] < 0 || s.need[v] > s.open[v] {
                return false;
            }
            if s.open[v] == 0 || (s.need[v] != 0 && s.need[v] != s.open[v]) {
                continue;
            }
            let all_out = s.need[v] != 0;
            for &e in &self.incident[v] {
                if s.dir[e] != 0 {
                    continue;
                }
                let (a, b) = self.ends[e];
                let other = if a == v { b } else { a };
                let tail = if all_out { v } else { other };
                self.orient(s, e, tail);
                queue.push(other);
            }
        }
        true
    }

    fn branch_vertex(&self, s: &State) -> Option<usize> {
        (0..self.incident.len())
            .filter(|&v| s.open[v] > 0)
            .min_by_key(|&v| (s.need[v].min(s.open[v] - s.need[v]), s.open[v], v))
    }

    fn child(&self, s: &State, e: usize, tail: usize) -> Option<State> {
        let mut next = s.clone();
        let head = self.orient(&mut next, e, tail);
        let mut queue = vec![tail, head];
        self.propagate(&mut next, &mut queue).then_some(next)
    }

    fn search(&self, s: State, depth: u32, ctl: Control, ticks: &mut u32) -> Result<u128> {
        *ticks += 1;
        if (*ticks).is_multiple_of(DEADLINE_POLL) {
            if let Some(deadline) = ctl.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout);
                }
            }
        }
        let Some(v) = self.branch_vertex(&s) else {
            return Ok(1);
        };
        let e = *self.incident[v]
            .iter()
            .find(|&&e| s.dir[e] == 0)
            .expect("open edge at branch vertex");
        let (a, b) = self.ends[e];
        let other = if a == v { b } else { a };
        let out = self.child(&s, e, v);
        let into = self.child(&s, e, other);
        drop(s);

        if ctl.parallel && depth < PARALLEL_DEPTH {
            let (x, y) = rayon::join(
                || self.run(out, depth, ctl, &mut 0),
                || self.run(into, depth, ctl, &mut 0),
            );
            Ok(x? + y?)
        } else {
            Ok(self.run(out, depth, ctl, ticks)? + self.run(into, depth, ctl, ticks)?)
        }
    }

    fn run(&self, s: Option<State>, depth: u32, ctl: Control, ticks: &mut u32) -> Result<u128> {
        match s {
            Some(s) => self.search(s, depth + 1, ctl, ticks),
            None => Ok(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_has_two_orientations() {
        let inst = Instance::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(inst.count(vec![1, 1, 1, 1], Control::default()).unwrap(), 2);
        assert_eq!(inst.count(vec![2, 0, 2, 0], Control::default()).unwrap(), 1);
        assert_eq!(inst.count(vec![2, 2, 0, 1], Control::default()).unwrap(), 0);
    }

    #[test]
    fn parallel_agrees_with_sequential() {
        // K6: outdegree sequences summing to 15
        let mut ends = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                ends.push((a, b));
            }
        }
        let inst = Instance::new(6, ends);
        let need = vec![3, 3, 2, 2, 3, 2];
        let seq = inst.count(need.clone(), Control::default()).unwrap();
        let par = inst.count(need, Control { parallel: true, deadline: None }).unwrap();
        assert_eq!(seq, par);
        assert!(seq > 0);
    }

    #[test]
    fn expired_deadline_times_out() {
        let mut ends = Vec::new();
        for a in 0..14 {
            for b in a + 1..14 {
                ends.push((a, b));
            }
        }
        let inst = Instance::new(14, ends);
        let ctl = Control { deadline: Some(Instant::now()), parallel: false };
        let need = (0..14).map(|i| 6 + (i % 2) as i64).collect();
        assert_eq!(inst.count(need, ctl), Err(Error::Timeout));
    }
}
