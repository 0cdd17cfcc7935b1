//! Satisfiability over box levels.
//!
//! A world is summarized by its type: the atoms it makes true and its box
//! level, the set of boxed subformulas it makes true. Box levels grow along
//! the order and are constant on clusters. A type is Hintikka when the body
//! of every box in its level holds; every box outside the level is an
//! obligation that some world above must discharge by falsifying its body.
//!
//! For each level we compute whether a cluster at that level can head a
//! model of the frame class, and which obligations can be discharged
//! strictly above it. Both depend only on strictly larger levels, so one
//! memoized pass over supersets decides every level. Only closed levels
//! are visited: a box whose body holds at every type any level above could
//! have is never an obligation that can be met, so it must be in the level.
//! A good level realizes all of its Hintikka types: the cluster chosen for
//! the level is reused, and any other type becomes a singleton cluster
//! directly below it.
//!
//! For confluent frames every model has exactly one final cluster. Each
//! candidate final cluster is fixed first and the remaining clusters, all
//! non-final and all below it, are eliminated within its level.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::rc::Rc;
use std::time::Instant;

use super::logic::{Lambda, LogicId};
use super::Budget;
use crate::frame_formulas::Bound;
use crate::kripke::OrderMode;
use crate::kripke::{close_preorder, default_world_names, model_check, PreorderModel, WorldSet};
use crate::syntax::Formula;

/// Set in a discharge mask when some good level is strictly above.
const FLAG: u64 = 1 << 63;
const MAX_LETTERS: usize = 62;
const MAX_ATOMS: usize = 20;
/// Above this many atoms `close` evaluates with atoms unknown.
const CLOSE_ATOMS: usize = 6;

pub(crate) type NodeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Atom(u32),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Imp(NodeId, NodeId),
    Iff(NodeId, NodeId),
    Box(u32),
}

/// Why a decision was abandoned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Stop(pub String);

/// Hash-consed formula DAG with boxes numbered in creation order, so the
/// body of box `j` mentions only boxes below `j`.
#[derive(Default)]
struct Dag {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    atoms: Vec<String>,
    atom_index: HashMap<String, u32>,
    box_body: Vec<NodeId>,
    box_of_body: HashMap<NodeId, u32>,
}

impl Dag {
    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n);
        self.index.insert(n, id);
        id
    }

    fn add(&mut self, f: &Formula) -> NodeId {
        match f {
            Formula::Atom(a) => {
                let next = self.atoms.len() as u32;
                let i = *self.atom_index.entry(a.clone()).or_insert(next);
                if i == next {
                    self.atoms.push(a.clone());
                }
                self.intern(Node::Atom(i))
            }
            Formula::Bottom => self.intern(Node::Const(false)),
            Formula::Top => self.intern(Node::Const(true)),
            Formula::Not(g) => {
                let g = self.add(g);
                self.intern(Node::Not(g))
            }
            Formula::And(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                self.intern(Node::And(a, b))
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                self.intern(Node::Or(a, b))
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                self.intern(Node::Imp(a, b))
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                self.intern(Node::Iff(a, b))
            }
            Formula::Box(g) => {
                let body = self.add(g);
                self.box_node(body)
            }
            Formula::Diamond(g) => {
                let g = self.add(g);
                let neg = self.intern(Node::Not(g));
                let b = self.box_node(neg);
                self.intern(Node::Not(b))
            }
        }
    }

    fn box_node(&mut self, body: NodeId) -> NodeId {
        let next = self.box_body.len() as u32;
        let j = *self.box_of_body.entry(body).or_insert(next);
        if j == next {
            self.box_body.push(body);
        }
        self.intern(Node::Box(j))
    }

    /// Two-valued evaluation of every node for atoms `v` and level `level`.
    fn eval(&self, v: u64, level: u64, out: &mut Vec<bool>) {
        out.clear();
        for n in &self.nodes {
            let x = match *n {
                Node::Const(c) => c,
                Node::Atom(i) => v >> i & 1 == 1,
                Node::Not(a) => !out[a as usize],
                Node::And(a, b) => out[a as usize] && out[b as usize],
                Node::Or(a, b) => out[a as usize] || out[b as usize],
                Node::Imp(a, b) => !out[a as usize] || out[b as usize],
                Node::Iff(a, b) => out[a as usize] == out[b as usize],
                Node::Box(j) => level >> j & 1 == 1,
            };
            out.push(x);
        }
    }

    /// Kleene evaluation with the first `atoms_known` atoms and first
    /// `boxes_known` boxes assigned. 0 false, 1 true, 2 unknown.
    fn eval3(&self, v: u64, atoms_known: usize, level: u64, boxes_known: usize, out: &mut Vec<u8>) {
        let known = if boxes_known >= 64 {
            u64::MAX
        } else {
            (1u64 << boxes_known) - 1
        };
        self.eval_masked(v, atoms_known, level, known, out)
    }

    /// Kleene evaluation where only the boxes in `known` are assigned.
    fn eval_masked(&self, v: u64, atoms_known: usize, level: u64, known: u64, out: &mut Vec<u8>) {
        out.clear();
        for n in &self.nodes {
            let x = match *n {
                Node::Const(c) => c as u8,
                Node::Atom(i) => {
                    if (i as usize) < atoms_known {
                        (v >> i & 1) as u8
                    } else {
                        2
                    }
                }
                Node::Not(a) => match out[a as usize] {
                    2 => 2,
                    x => 1 - x,
                },
                Node::And(a, b) => match (out[a as usize], out[b as usize]) {
                    (0, _) | (_, 0) => 0,
                    (1, 1) => 1,
                    _ => 2,
                },
                Node::Or(a, b) => match (out[a as usize], out[b as usize]) {
                    (1, _) | (_, 1) => 1,
                    (0, 0) => 0,
                    _ => 2,
                },
                Node::Imp(a, b) => match (out[a as usize], out[b as usize]) {
                    (0, _) | (_, 1) => 1,
                    (1, 0) => 0,
                    _ => 2,
                },
                Node::Iff(a, b) => match (out[a as usize], out[b as usize]) {
                    (2, _) | (_, 2) => 2,
                    (x, y) => (x == y) as u8,
                },
                Node::Box(j) => {
                    if known >> j & 1 == 1 {
                        (level >> j & 1) as u8
                    } else {
                        2
                    }
                }
            };
            out.push(x);
        }
    }
}

/// Hintikka types of one level.
struct LevelTypes {
    /// `(atoms, mask of boxes whose body fails)`, atoms ascending.
    types: Vec<(u64, u64)>,
    cover_all: u64,
}

#[derive(Clone, Copy)]
struct LevelInfo {
    /// Obligations (and `FLAG`) dischargeable strictly above.
    strict: u64,
    /// Same, counting the level itself when it is good.
    incl: u64,
    good: bool,
}

/// A candidate final cluster for confluent frames.
#[derive(Clone, Debug)]
struct Top {
    level: u64,
    worlds: Vec<u64>,
    cover: u64,
}

/// A satisfying root: its atoms, its level, and the final cluster used.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Root {
    pub atoms: u64,
    pub level: u64,
    top: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Inst {
    Cluster(u64),
    Lean(u64, u64),
    Top,
}

struct Plan {
    worlds: Vec<u64>,
    children: Vec<Inst>,
}

pub(crate) struct Decider {
    dag: Dag,
    logic: LogicId,
    budget: Budget,
    started: Instant,
    ticks: u64,
    frozen: bool,
    types: HashMap<u64, Rc<LevelTypes>>,
    levels: HashMap<u64, LevelInfo>,
    tops: Option<Vec<Top>>,
    top_levels: Vec<HashMap<u64, LevelInfo>>,
    scratch: Vec<bool>,
    close_buf: Vec<u8>,
}

impl Decider {
    pub fn new(logic: LogicId, budget: Budget) -> Decider {
        Decider {
            dag: Dag::default(),
            logic,
            budget,
            started: Instant::now(),
            ticks: 0,
            frozen: false,
            types: HashMap::new(),
            levels: HashMap::new(),
            tops: None,
            top_levels: Vec::new(),
            scratch: Vec::new(),
            close_buf: Vec::new(),
        }
    }

    /// Register a formula. All formulas must be added before the first query.
    pub fn add(&mut self, f: &Formula) -> Result<NodeId, Stop> {
        if self.frozen {
            if let Some(id) = self.lookup(f) {
                return Ok(id);
            }
            panic!("formula added after the first query");
        }
        let id = self.dag.add(f);
        if self.dag.box_body.len() > MAX_LETTERS.min(self.budget.max_closure) {
            return Err(Stop(format!(
                "{} boxed subformulas exceed the closure budget of {}",
                self.dag.box_body.len(),
                MAX_LETTERS.min(self.budget.max_closure)
            )));
        }
        if self.dag.atoms.len() > MAX_ATOMS {
            return Err(Stop(format!("more than {MAX_ATOMS} atoms")));
        }
        Ok(id)
    }

    fn lookup(&self, f: &Formula) -> Option<NodeId> {
        let n = match f {
            Formula::Atom(a) => Node::Atom(*self.dag.atom_index.get(a)?),
            Formula::Bottom => Node::Const(false),
            Formula::Top => Node::Const(true),
            Formula::Not(g) => Node::Not(self.lookup(g)?),
            Formula::And(a, b) => Node::And(self.lookup(a)?, self.lookup(b)?),
            Formula::Or(a, b) => Node::Or(self.lookup(a)?, self.lookup(b)?),
            Formula::Implies(a, b) => Node::Imp(self.lookup(a)?, self.lookup(b)?),
            Formula::Iff(a, b) => Node::Iff(self.lookup(a)?, self.lookup(b)?),
            Formula::Box(g) => Node::Box(*self.dag.box_of_body.get(&self.lookup(g)?)?),
            Formula::Diamond(g) => {
                let neg = self.dag.index.get(&Node::Not(self.lookup(g)?))?;
                let b = self.dag.box_of_body.get(neg)?;
                Node::Not(*self.dag.index.get(&Node::Box(*b))?)
            }
        };
        self.dag.index.get(&n).copied()
    }

    /// Values of `nodes` in the root's type.
    pub fn values(&mut self, root: &Root, nodes: &[NodeId]) -> Vec<bool> {
        let mut buf = std::mem::take(&mut self.scratch);
        self.dag.eval(root.atoms, root.level, &mut buf);
        let out = nodes.iter().map(|&n| buf[n as usize]).collect();
        self.scratch = buf;
        out
    }

    fn letters(&self) -> usize {
        self.dag.box_body.len()
    }

    fn all_letters(&self) -> u64 {
        (1u64 << self.letters()) - 1
    }

    /// Adds every box whose body holds at all types of levels above
    /// `level`. `None` when no level above has a Hintikka type.
    fn close(&mut self, mut level: u64) -> Option<u64> {
        let mut buf = std::mem::take(&mut self.close_buf);
        let letters = self.letters();
        let out = loop {
            // boxes whose body fails at some possible type of a level above
            let mut open = 0u64;
            let mut any = false;
            for v in self.close_valuations() {
                let atoms_known = if v == u64::MAX {
                    0
                } else {
                    self.dag.atoms.len()
                };
                self.dag.eval_masked(v, atoms_known, level, level, &mut buf);
                if (0..letters)
                    .any(|j| level >> j & 1 == 1 && buf[self.dag.box_body[j] as usize] == 0)
                {
                    continue;
                }
                any = true;
                for j in 0..letters {
                    if buf[self.dag.box_body[j] as usize] != 1 {
                        open |= 1 << j;
                    }
                }
            }
            if !any {
                break None;
            }
            let next = level | (self.all_letters() & !open);
            if next == level {
                break Some(level);
            }
            level = next;
        };
        self.close_buf = buf;
        out
    }

    /// Atom valuations tried by `close`; `u64::MAX` alone leaves atoms unknown.
    fn close_valuations(&self) -> std::ops::RangeInclusive<u64> {
        let n = self.dag.atoms.len();
        if n <= CLOSE_ATOMS {
            0..=(1u64 << n) - 1
        } else {
            u64::MAX..=u64::MAX
        }
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.ticks += 1;
        if self.ticks % 1024 == 0 {
            if let Some(limit) = self.budget.time {
                if self.started.elapsed() > limit {
                    return Err(Stop(format!("time budget of {limit:?} exhausted")));
                }
            }
        }
        Ok(())
    }

    fn level_types(&mut self, level: u64) -> Result<Rc<LevelTypes>, Stop> {
        if let Some(t) = self.types.get(&level) {
            return Ok(t.clone());
        }
        if self.types.len() >= self.budget.max_levels {
            return Err(Stop(format!(
                "explored {} box levels, the level budget",
                self.budget.max_levels
            )));
        }
        self.tick()?;
        let mut vals = std::mem::take(&mut self.scratch);
        let mut types = Vec::new();
        let mut cover_all = 0;
        let obligations = self.all_letters() & !level;
        'val: for v in 0..(1u64 << self.dag.atoms.len()) {
            self.dag.eval(v, level, &mut vals);
            let mut neg = 0u64;
            for (j, &body) in self.dag.box_body.iter().enumerate() {
                if !vals[body as usize] {
                    if level >> j & 1 == 1 {
                        continue 'val;
                    }
                    neg |= 1 << j;
                }
            }
            types.push((v, neg & obligations));
            cover_all |= neg & obligations;
        }
        self.scratch = vals;
        let t = Rc::new(LevelTypes { types, cover_all });
        self.types.insert(level, t.clone());
        Ok(t)
    }

    // ----- general frames -----

    fn info(&mut self, level: u64) -> Result<LevelInfo, Stop> {
        if let Some(&i) = self.levels.get(&level) {
            return Ok(i);
        }
        let mut strict = 0;
        for j in 0..self.letters() {
            if level >> j & 1 == 0 {
                if let Some(next) = self.close(level | 1 << j) {
                    strict |= self.info(next)?.incl;
                }
            }
        }
        let t = self.level_types(level)?;
        let good = !t.types.is_empty() && self.choose_cluster(&t, level, strict).is_some();
        let incl = if good {
            strict | t.cover_all | FLAG
        } else {
            strict
        };
        let i = LevelInfo { strict, incl, good };
        self.levels.insert(level, i);
        Ok(i)
    }

    /// The cluster heading a level: `(atoms of its worlds, is final)`.
    fn choose_cluster(&self, t: &LevelTypes, level: u64, strict: u64) -> Option<(Vec<u64>, bool)> {
        let obligations = self.all_letters() & !level;
        if let Some(q) = cover(&t.types, obligations, self.logic.m) {
            return Some((q, true));
        }
        if strict & FLAG != 0 {
            if let Some(q) = cover(&t.types, obligations & !strict, self.logic.n) {
                return Some((q, false));
            }
        }
        None
    }

    // ----- confluent frames -----

    fn tops(&mut self) -> Result<Vec<Top>, Stop> {
        if let Some(t) = &self.tops {
            return Ok(t.clone());
        }
        let mut by_level: BTreeMap<u64, Top> = BTreeMap::new();
        // a final cluster discharges exactly the boxes outside its level, so
        // candidates on the same level are interchangeable; keep the smallest
        let mut keep = |top: Top| {
            let e = by_level.entry(top.level).or_insert_with(|| top.clone());
            if top.worlds.len() < e.worlds.len() {
                *e = top;
            }
        };
        match self.logic.m {
            Bound::Omega => {
                // final cluster = all Hintikka types of a level that discharges itself
                let mut found = Vec::new();
                let all: Vec<u64> = (0..1u64 << self.dag.atoms.len()).collect();
                self.final_levels(0, 0, all, &mut found)?;
                for level in found {
                    let t = self.level_types(level)?;
                    keep(Top {
                        level,
                        worlds: t.types.iter().map(|&(v, _)| v).collect(),
                        cover: t.cover_all,
                    });
                }
            }
            Bound::Finite(m) => {
                let vals: Vec<u64> = (0..1u64 << self.dag.atoms.len()).collect();
                let mut pick: Vec<usize> = Vec::new();
                let mut subsets: Vec<Vec<u64>> = Vec::new();
                fn rec(
                    vals: &[u64],
                    m: usize,
                    start: usize,
                    pick: &mut Vec<usize>,
                    out: &mut Vec<Vec<u64>>,
                ) {
                    if !pick.is_empty() {
                        out.push(pick.iter().map(|&i| vals[i]).collect());
                    }
                    if pick.len() == m {
                        return;
                    }
                    for i in start..vals.len() {
                        pick.push(i);
                        rec(vals, m, i + 1, pick, out);
                        pick.pop();
                    }
                }
                rec(&vals, m, 0, &mut pick, &mut subsets);
                for worlds in subsets {
                    self.tick()?;
                    let (level, cover) = self.final_level_of(&worlds);
                    keep(Top {
                        level,
                        worlds,
                        cover,
                    });
                }
            }
        }
        let tops: Vec<Top> = by_level.into_values().collect();
        self.top_levels = vec![HashMap::new(); tops.len()];
        self.tops = Some(tops.clone());
        Ok(tops)
    }

    /// Level of a final cluster whose worlds carry `worlds`, and what it discharges.
    fn final_level_of(&mut self, worlds: &[u64]) -> (u64, u64) {
        let mut vals = std::mem::take(&mut self.scratch);
        let mut level = 0u64;
        for j in 0..self.letters() {
            let body = self.dag.box_body[j] as usize;
            // body j only depends on boxes below j, already decided
            let holds = worlds.iter().all(|&v| {
                self.dag.eval(v, level, &mut vals);
                vals[body]
            });
            if holds {
                level |= 1 << j;
            }
        }
        let mut cover = 0;
        for &v in worlds {
            self.dag.eval(v, level, &mut vals);
            for (j, &body) in self.dag.box_body.iter().enumerate() {
                if !vals[body as usize] {
                    cover |= 1 << j;
                }
            }
        }
        self.scratch = vals;
        (level, cover)
    }

    /// Levels whose Hintikka types discharge all of the level's obligations.
    fn final_levels(
        &mut self,
        j: usize,
        level: u64,
        alive: Vec<u64>,
        out: &mut Vec<u64>,
    ) -> Result<(), Stop> {
        self.tick()?;
        if j == self.letters() {
            let t = self.level_types(level)?;
            if !t.types.is_empty() && t.cover_all == self.all_letters() & !level {
                out.push(level);
            }
            return Ok(());
        }
        let body = self.dag.box_body[j] as usize;
        let mut vals = std::mem::take(&mut self.scratch);
        let with: Vec<u64> = alive
            .iter()
            .copied()
            .filter(|&v| {
                self.dag.eval(v, level, &mut vals);
                vals[body]
            })
            .collect();
        self.scratch = vals;
        if !with.is_empty() {
            self.final_levels(j + 1, level | 1 << j, with.clone(), out)?;
        }
        // leaving box j out needs a surviving type falsifying its body
        if with.len() < alive.len() {
            self.final_levels(j + 1, level, alive, out)?;
        }
        Ok(())
    }

    fn top_info(&mut self, t: usize, top: &Top, level: u64) -> Result<LevelInfo, Stop> {
        if let Some(&i) = self.top_levels[t].get(&level) {
            return Ok(i);
        }
        let mut strict = top.cover | FLAG;
        for j in 0..self.letters() {
            if top.level >> j & 1 == 1 && level >> j & 1 == 0 {
                match self.close(level | 1 << j) {
                    Some(next) if next & !top.level == 0 => {
                        strict |= self.top_info(t, top, next)?.incl
                    }
                    _ => {}
                }
            }
        }
        let types = self.level_types(level)?;
        let good = level == top.level
            || (!types.types.is_empty()
                && cover(
                    &types.types,
                    self.all_letters() & !level & !strict,
                    self.logic.n,
                )
                .is_some());
        let incl = if good {
            strict | types.cover_all
        } else {
            strict
        };
        let i = LevelInfo { strict, incl, good };
        self.top_levels[t].insert(level, i);
        Ok(i)
    }

    // ----- root search -----

    /// Find a type satisfying every `(node, value)` constraint that heads a
    /// model of the frame class.
    pub fn find_root(&mut self, constraints: &[(NodeId, bool)]) -> Result<Option<Root>, Stop> {
        self.frozen = true;
        match self.logic.lambda {
            Lambda::Int => self.search(constraints, self.all_letters(), None),
            Lambda::KC => {
                let tops = self.tops()?;
                for t in 0..tops.len() {
                    if let Some(r) = self.search(constraints, tops[t].level, Some(t))? {
                        return Ok(Some(r));
                    }
                }
                Ok(None)
            }
        }
    }

    fn search(
        &mut self,
        constraints: &[(NodeId, bool)],
        within: u64,
        top: Option<usize>,
    ) -> Result<Option<Root>, Stop> {
        let mut buf = Vec::new();
        self.dfs(constraints, within, top, 0, 0, 0, 0, &mut buf)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        constraints: &[(NodeId, bool)],
        within: u64,
        top: Option<usize>,
        v: u64,
        atoms_known: usize,
        level: u64,
        boxes_known: usize,
        buf: &mut Vec<u8>,
    ) -> Result<Option<Root>, Stop> {
        self.tick()?;
        self.dag.eval3(v, atoms_known, level, boxes_known, buf);
        for &(node, want) in constraints {
            if buf[node as usize] == !want as u8 {
                return Ok(None);
            }
        }
        for j in 0..boxes_known {
            if level >> j & 1 == 1 && buf[self.dag.box_body[j] as usize] == 0 {
                return Ok(None);
            }
        }
        if atoms_known < self.dag.atoms.len() {
            for bit in [0, 1] {
                let r = self.dfs(
                    constraints,
                    within,
                    top,
                    v | bit << atoms_known,
                    atoms_known + 1,
                    level,
                    boxes_known,
                    buf,
                )?;
                if r.is_some() {
                    return Ok(r);
                }
            }
            return Ok(None);
        }
        if boxes_known < self.letters() {
            // a box whose body is settled by the boxes chosen so far
            let known_in = level & ((1u64 << boxes_known) - 1);
            self.dag.eval_masked(0, 0, level, known_in, buf);
            let forced = buf[self.dag.box_body[boxes_known] as usize];
            let options: &[u64] = match (within >> boxes_known & 1 == 1, forced) {
                (_, 0) => &[0],
                (false, 1) => return Ok(None),
                (true, 1) => &[1],
                (false, _) => &[0],
                (true, _) => &[1, 0],
            };
            for &bit in options {
                let r = self.dfs(
                    constraints,
                    within,
                    top,
                    v,
                    atoms_known,
                    level | bit << boxes_known,
                    boxes_known + 1,
                    buf,
                )?;
                if r.is_some() {
                    return Ok(r);
                }
            }
            return Ok(None);
        }
        if self.close(level) != Some(level) {
            return Ok(None);
        }
        let good = match top {
            None => self.info(level)?.good,
            Some(t) => {
                let tp = self.tops.as_ref().expect("tops computed")[t].clone();
                self.top_info(t, &tp, level)?.good
            }
        };
        Ok(good.then_some(Root {
            atoms: v,
            level,
            top,
        }))
    }

    // ----- model extraction -----

    fn plan(&mut self, inst: Inst, top: Option<usize>) -> Result<Plan, Stop> {
        match (inst, top) {
            (Inst::Top, Some(t)) => {
                let tp = self.tops.as_ref().expect("tops computed")[t].clone();
                Ok(Plan {
                    worlds: tp.worlds,
                    children: vec![],
                })
            }
            (Inst::Lean(level, v), _) => Ok(Plan {
                worlds: vec![v],
                children: vec![self.cluster_of(level, top)?],
            }),
            (Inst::Cluster(level), None) => {
                let info = self.info(level)?;
                let t = self.level_types(level)?;
                let (worlds, is_final) = self
                    .choose_cluster(&t, level, info.strict)
                    .expect("good level has a cluster");
                let mut children = Vec::new();
                if !is_final {
                    let covered = worlds_cover(&t, &worlds);
                    let missing = self.all_letters() & !level & !covered;
                    for j in 0..self.letters() {
                        if missing >> j & 1 == 1 {
                            let w = self.witness(level, 1 << j, None)?;
                            if !children.contains(&w) {
                                children.push(w);
                            }
                        }
                    }
                    if children.is_empty() {
                        children.push(self.witness(level, FLAG, None)?);
                    }
                }
                Ok(Plan { worlds, children })
            }
            (Inst::Cluster(level), Some(t)) => {
                let tp = self.tops.as_ref().expect("tops computed")[t].clone();
                if level == tp.level {
                    return self.plan(Inst::Top, top);
                }
                let info = self.top_info(t, &tp, level)?;
                let types = self.level_types(level)?;
                let need = self.all_letters() & !level & !info.strict;
                let worlds =
                    cover(&types.types, need, self.logic.n).expect("good level has a cluster");
                let covered = worlds_cover(&types, &worlds);
                let missing = self.all_letters() & !level & !covered;
                let mut children = vec![Inst::Top];
                for j in 0..self.letters() {
                    if missing >> j & 1 == 1 {
                        let w = self.witness(level, 1 << j, top)?;
                        if !children.contains(&w) {
                            children.push(w);
                        }
                    }
                }
                Ok(Plan { worlds, children })
            }
            (Inst::Top, None) => unreachable!("final cluster instance without a top"),
        }
    }

    /// Instance for a type at `level`: the level's own cluster when the
    /// type belongs to it, otherwise a singleton leaning on that cluster.
    fn instance_for(&mut self, level: u64, v: u64, top: Option<usize>) -> Result<Inst, Stop> {
        let head = self.cluster_of(level, top)?;
        let plan = self.plan(head, top)?;
        Ok(if plan.worlds.contains(&v) {
            head
        } else {
            Inst::Lean(level, v)
        })
    }

    fn cluster_of(&mut self, level: u64, top: Option<usize>) -> Result<Inst, Stop> {
        if let Some(t) = top {
            if self.tops.as_ref().expect("tops computed")[t].level == level {
                return Ok(Inst::Top);
            }
        }
        Ok(Inst::Cluster(level))
    }

    /// An instance strictly above `level` discharging `bit` (a box or `FLAG`).
    fn witness(&mut self, level: u64, bit: u64, top: Option<usize>) -> Result<Inst, Stop> {
        let tp = top.map(|t| self.tops.as_ref().expect("tops computed")[t].clone());
        if let Some(tp) = &tp {
            if bit == FLAG || tp.cover & bit != 0 {
                return Ok(Inst::Top);
            }
        }
        let allowed = tp.as_ref().map_or(self.all_letters(), |tp| tp.level);
        for j in 0..self.letters() {
            if level >> j & 1 == 1 || allowed >> j & 1 == 0 {
                continue;
            }
            let Some(next) = self.close(level | 1 << j) else {
                continue;
            };
            if next & !allowed != 0 {
                continue;
            }
            let info = match (top, &tp) {
                (Some(t), Some(tp)) => self.top_info(t, tp, next)?,
                _ => self.info(next)?,
            };
            if info.incl & bit == 0 {
                continue;
            }
            if info.good {
                if bit == FLAG {
                    return self.cluster_of(next, top);
                }
                let t = self.level_types(next)?;
                if let Some(&(v, _)) = t.types.iter().find(|&&(_, neg)| neg & bit != 0) {
                    return self.instance_for(next, v, top);
                }
            }
            return self.witness(next, bit, top);
        }
        unreachable!("discharge mask promised a witness")
    }

    /// Materialize the model headed by `root`, names `w0..` in breadth-first order.
    pub fn extract(&mut self, root: Root) -> Result<(PreorderModel, usize), Stop> {
        let start = self.instance_for(root.level, root.atoms, root.top)?;
        let mut order: Vec<Inst> = vec![start];
        let mut index: HashMap<Inst, usize> = HashMap::from([(start, 0)]);
        let mut plans: Vec<Plan> = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(inst) = queue.pop_front() {
            let plan = self.plan(inst, root.top)?;
            for &c in &plan.children {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(c) {
                    e.insert(order.len());
                    order.push(c);
                    queue.push_back(c);
                }
            }
            plans.push(plan);
        }
        let mut offset = Vec::new();
        let mut worlds: Vec<(u64, u64)> = Vec::new();
        for (inst, plan) in order.iter().zip(&plans) {
            offset.push(worlds.len());
            let level = match *inst {
                Inst::Cluster(l) | Inst::Lean(l, _) => l,
                Inst::Top => self.tops.as_ref().expect("tops")[root.top.expect("top")].level,
            };
            // the root type comes first inside its instance
            let mut ws = plan.worlds.clone();
            if offset.len() == 1 {
                if let Some(p) = ws.iter().position(|&v| v == root.atoms) {
                    ws.swap(0, p);
                }
            }
            worlds.extend(ws.iter().map(|&v| (v, level)));
        }
        let total = worlds.len();
        if total > self.budget.max_worlds {
            return Err(Stop(format!(
                "model needs {total} worlds, more than the budget of {}",
                self.budget.max_worlds
            )));
        }
        let mut succ = vec![WorldSet::empty(total); total];
        for (i, plan) in plans.iter().enumerate() {
            let own = offset[i]..offset[i] + plan.worlds.len();
            for a in own.clone() {
                for b in own.clone() {
                    succ[a].insert(b);
                }
                for c in &plan.children {
                    let k = index[c];
                    succ[a].insert(offset[k]);
                }
            }
        }
        close_preorder(&mut succ);
        let mut valuation = BTreeMap::new();
        for (i, a) in self.dag.atoms.iter().enumerate() {
            let ext =
                WorldSet::from_indices(total, (0..total).filter(|&w| worlds[w].0 >> i & 1 == 1));
            valuation.insert(a.clone(), ext);
        }
        let model = PreorderModel::from_parts(
            default_world_names(total),
            succ,
            valuation,
            OrderMode::Strict,
        )
        .map_err(|e| Stop(format!("extracted model invalid: {e}")))?;
        Ok((model, 0))
    }
}

fn worlds_cover(t: &LevelTypes, worlds: &[u64]) -> u64 {
    t.types
        .iter()
        .filter(|(v, _)| worlds.contains(v))
        .fold(0, |acc, &(_, neg)| acc | neg)
}

/// At most `bound` types (by atoms) whose failing bodies cover `target`.
/// Smallest sets first, then lexicographically by position.
fn cover(types: &[(u64, u64)], target: u64, bound: Bound) -> Option<Vec<u64>> {
    if types.is_empty() {
        return None;
    }
    if target == 0 {
        return Some(vec![types[0].0]);
    }
    let union = types.iter().fold(0, |acc, &(_, m)| acc | m);
    if union & target != target {
        return None;
    }
    // distinct useful masks, first type for each
    let mut masks: Vec<(u64, u64)> = Vec::new();
    for &(v, m) in types {
        let m = m & target;
        if m != 0 && !masks.iter().any(|&(_, x)| x == m) {
            masks.push((v, m));
        }
    }
    let limit = match bound {
        Bound::Finite(k) => k,
        Bound::Omega => usize::MAX,
    };
    for size in 1..=limit.min(2) {
        if size == 1 {
            if let Some(&(v, _)) = masks.iter().find(|&&(_, m)| m == target) {
                return Some(vec![v]);
            }
        } else {
            for a in 0..masks.len() {
                for b in a + 1..masks.len() {
                    if masks[a].1 | masks[b].1 == target {
                        return Some(vec![masks[a].0, masks[b].0]);
                    }
                }
            }
        }
    }
    if limit <= 2 {
        return None;
    }
    if limit == usize::MAX {
        // greedy: take each type adding something new
        let mut got = 0;
        let mut out = Vec::new();
        for &(v, m) in &masks {
            if m & !got != 0 {
                got |= m;
                out.push(v);
            }
        }
        return Some(out);
    }
    // general finite bound above 2
    fn rec(
        masks: &[(u64, u64)],
        start: usize,
        left: usize,
        got: u64,
        target: u64,
        pick: &mut Vec<u64>,
    ) -> bool {
        if got == target {
            return true;
        }
        if left == 0 {
            return false;
        }
        for i in start..masks.len() {
            pick.push(masks[i].0);
            if rec(masks, i + 1, left - 1, got | masks[i].1, target, pick) {
                return true;
            }
            pick.pop();
        }
        false
    }
    let mut pick = Vec::new();
    rec(&masks, 0, limit, 0, target, &mut pick).then_some(pick)
}

/// Satisfiability of `f` with a verified model when satisfiable.
pub(crate) fn decide(
    f: &Formula,
    logic: LogicId,
    budget: &Budget,
) -> Result<Option<(PreorderModel, usize)>, Stop> {
    let mut d = Decider::new(logic, budget.clone());
    let node = d.add(f)?;
    let Some(root) = d.find_root(&[(node, true)])? else {
        return Ok(None);
    };
    let (model, w) = d.extract(root)?;
    if !model_check(&model, f).contains(w) {
        return Err(Stop(format!(
            "internal error: extracted model does not satisfy {f}"
        )));
    }
    if let Some(why) = logic.frame_violation(&model) {
        return Err(Stop(format!(
            "internal error: extracted model outside {logic}: {why}"
        )));
    }
    Ok(Some((model, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn sat(s: &str, logic: LogicId) -> bool {
        decide(&parse(s).unwrap(), logic, &Budget::default())
            .unwrap()
            .is_some()
    }

    #[test]
    fn propositional() {
        assert!(!sat("p & ~p", LogicId::s4()));
        assert!(sat("p & ~q", LogicId::s4()));
    }

    #[test]
    fn fork_needs_branching() {
        assert!(sat("<>[]p & <>[]~p", LogicId::s4()));
        assert!(!sat("<>[]p & <>[]~p", LogicId::s4_2()));
    }

    #[test]
    fn reflexive_transitive() {
        assert!(!sat("[]p & ~p", LogicId::s4()));
        assert!(!sat("[]p & ~[][]p", LogicId::s4()));
    }

    #[test]
    fn cluster_bounds() {
        // a final cluster with both p and ~p needs size 2
        assert!(sat("[]<>p & []<>~p", LogicId::s4()));
        assert!(!sat("[]<>p & []<>~p", LogicId::grz()));
        // Grz axiom fails only with clusters
        let grz = "~([]([](p -> []p) -> p) -> p)";
        assert!(sat(grz, LogicId::s4()));
        assert!(!sat(grz, LogicId::grz()));
    }

    #[test]
    fn cover_prefers_small_sets() {
        let types = [(0, 0b01), (1, 0b10), (2, 0b11)];
        assert_eq!(cover(&types, 0b11, Bound::Finite(1)), Some(vec![2]));
        assert_eq!(cover(&types[..2], 0b11, Bound::Finite(1)), None);
        assert_eq!(cover(&types[..2], 0b11, Bound::Finite(2)), Some(vec![0, 1]));
        assert_eq!(cover(&types[..2], 0b11, Bound::Omega), Some(vec![0, 1]));
    }
}
