//! Hash-consed formula store.
//!
//! Children are always interned before their parents, so node ids are a
//! topological order and whole-arena evaluation is a single forward pass.

use std::collections::HashMap;

use crate::syntax::{Agent, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(k: usize) -> NodeId {
        NodeId(u32::try_from(k).expect("arena overflow"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// Index into [`FormulaArena::atoms`].
    Atom(u32),
    Neg(NodeId),
    And(NodeId, NodeId),
    Might(NodeId),
    Know(Agent, NodeId),
}

#[derive(Clone, Debug, Default)]
pub struct FormulaArena {
    atoms: Vec<String>,
    nodes: Vec<Node>,
    sizes: Vec<usize>,
    index: HashMap<Node, NodeId>,
}

impl FormulaArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id.index()]
    }

    pub fn size(&self, id: NodeId) -> usize {
        self.sizes[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    fn push(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let size = match node {
            Node::Atom(_) => 1,
            Node::Neg(c) | Node::Might(c) | Node::Know(_, c) => 1 + self.size(c),
            Node::And(a, b) => 1 + self.size(a) + self.size(b),
        };
        let id = NodeId(u32::try_from(self.nodes.len()).expect("arena overflow"));
        self.nodes.push(node);
        self.sizes.push(size);
        self.index.insert(node, id);
        id
    }

    pub fn atom(&mut self, name: &str) -> NodeId {
        let idx = match self.atoms.iter().position(|a| a == name) {
            Some(i) => i,
            None => {
                self.atoms.push(name.to_string());
                self.atoms.len() - 1
            }
        };
        self.push(Node::Atom(idx as u32))
    }

    pub fn neg(&mut self, c: NodeId) -> NodeId {
        self.push(Node::Neg(c))
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::And(a, b))
    }

    pub fn might(&mut self, c: NodeId) -> NodeId {
        self.push(Node::Might(c))
    }

    pub fn know(&mut self, agent: Agent, c: NodeId) -> NodeId {
        self.push(Node::Know(agent, c))
    }

    pub fn intern(&mut self, f: &Formula) -> NodeId {
        match f {
            Formula::Atom(p) => self.atom(p),
            Formula::Neg(c) => {
                let c = self.intern(c);
                self.neg(c)
            }
            Formula::And(a, b) => {
                let a = self.intern(a);
                let b = self.intern(b);
                self.and(a, b)
            }
            Formula::Might(c) => {
                let c = self.intern(c);
                self.might(c)
            }
            Formula::Know(ag, c) => {
                let c = self.intern(c);
                self.know(*ag, c)
            }
        }
    }

    pub fn formula(&self, id: NodeId) -> Formula {
        match self.node(id) {
            Node::Atom(i) => Formula::Atom(self.atoms[i as usize].clone()),
            Node::Neg(c) => Formula::neg(self.formula(c)),
            Node::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Node::Might(c) => Formula::might(self.formula(c)),
            Node::Know(ag, c) => Formula::know(ag, self.formula(c)),
        }
    }

    pub fn is_diamond_restricted(&self, id: NodeId) -> bool {
        match self.node(id) {
            Node::Atom(_) | Node::Know(..) => true,
            Node::Might(_) => false,
            Node::Neg(c) => self.is_diamond_restricted(c),
            Node::And(a, b) => self.is_diamond_restricted(a) && self.is_diamond_restricted(b),
        }
    }

    /// Intern every formula of size `1..=max_size` over `atoms` and `agents`.
    ///
    /// Returns the ids grouped by size (`result[s - 1]` holds size `s`), each
    /// group in a deterministic order.
    pub fn enumerate(&mut self, atoms: &[&str], agents: &[Agent], max_size: usize) -> Vec<Vec<NodeId>> {
        let mut by_size: Vec<Vec<NodeId>> = Vec::with_capacity(max_size);
        for size in 1..=max_size {
            let mut level = Vec::new();
            if size == 1 {
                for a in atoms {
                    level.push(self.atom(a));
                }
            } else {
                let prev = by_size[size - 2].clone();
                for &c in &prev {
                    level.push(self.neg(c));
                }
                for &c in &prev {
                    level.push(self.might(c));
                }
                for &ag in agents {
                    for &c in &prev {
                        level.push(self.know(ag, c));
                    }
                }
                for left_size in 1..size - 1 {
                    let right_size = size - 1 - left_size;
                    let lefts = by_size[left_size - 1].clone();
                    let rights = by_size[right_size - 1].clone();
                    for &a in &lefts {
                        for &b in &rights {
                            level.push(self.and(a, b));
                        }
                    }
                }
            }
            by_size.push(level);
        }
        by_size
    }
}

/// Enumerate formulas of size `1..=max_size` as a flat list.
pub fn formulas_up_to(atoms: &[&str], agents: &[Agent], max_size: usize) -> Vec<Formula> {
    let mut arena = FormulaArena::new();
    arena
        .enumerate(atoms, agents, max_size)
        .into_iter()
        .flatten()
        .map(|id| arena.formula(id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use std::collections::HashSet;

    /// Count of ASTs of each size by the constructor recurrence, independent of the arena.
    fn expected_counts(atoms: u64, agents: u64, max: usize) -> Vec<u64> {
        let mut c = vec![0u64; max + 1];
        for s in 1..=max {
            c[s] = if s == 1 {
                atoms
            } else {
                let unary = (2 + agents) * c[s - 1];
                let binary: u64 = (1..s - 1).map(|l| c[l] * c[s - 1 - l]).sum();
                unary + binary
            };
        }
        c[1..].to_vec()
    }

    #[test]
    fn enumeration_counts_match_recurrence() {
        let mut arena = FormulaArena::new();
        let groups = arena.enumerate(&["p", "q"], &[Agent::ONE], 6);
        let got: Vec<u64> = groups.iter().map(|g| g.len() as u64).collect();
        assert_eq!(got, expected_counts(2, 1, 6));
        assert_eq!(got, vec![2, 6, 22, 90, 394, 1806]);
        let all: HashSet<NodeId> = groups.iter().flatten().copied().collect();
        assert_eq!(all.len(), 2320);
        for (s, g) in groups.iter().enumerate() {
            assert!(g.iter().all(|&id| arena.size(id) == s + 1 && arena.formula(id).size() == s + 1));
        }
    }

    #[test]
    fn two_agent_counts() {
        let mut arena = FormulaArena::new();
        let groups = arena.enumerate(&["p"], &[Agent::ONE, Agent::new(2).unwrap()], 5);
        let got: Vec<u64> = groups.iter().map(|g| g.len() as u64).collect();
        assert_eq!(got, expected_counts(1, 2, 5));
    }

    #[test]
    fn intern_is_hash_consing() {
        let mut arena = FormulaArena::new();
        let f = parse("K~<>p & K~<>p").unwrap();
        let id = arena.intern(&f);
        assert_eq!(arena.len(), 5);
        assert_eq!(arena.formula(id), f);
        assert_eq!(arena.intern(&f), id);
        for id in arena.ids() {
            match arena.node(id) {
                Node::Neg(c) | Node::Might(c) | Node::Know(_, c) => assert!(c < id),
                Node::And(a, b) => assert!(a < id && b < id),
                Node::Atom(_) => {}
            }
        }
    }
}
