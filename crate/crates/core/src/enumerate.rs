//! Exhaustive finite model search. Formulas are compiled to an indexed form
//! and evaluated in three-valued logic over partial assignments, so a branch
//! is cut as soon as some formula is definitely false.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::LogicError;
use crate::logic::{FormulaSet, SortKind};
use crate::model::{carrier_element, Interpretation, Value};
use crate::syntax::*;

pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Carriers for every sort and the integer range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub sorts: BTreeMap<Name, Vec<Value>>,
    pub ints: Vec<i64>,
}

impl Universe {
    /// Carriers `S#1..S#n` from the given sizes; enumerations use their
    /// constants. Every carrier sort needs a positive size.
    pub fn new(fs: &FormulaSet, sizes: &BTreeMap<Name, usize>, ints: &BTreeSet<i64>) -> Result<Self, LogicError> {
        let mut sorts = BTreeMap::new();
        for (s, kind) in &fs.sorts {
            let els = match kind {
                SortKind::Enum(els) => els.iter().cloned().map(Value::Elem).collect(),
                SortKind::Carrier => {
                    let n =
                        sizes.get(s).copied().filter(|n| *n > 0).ok_or_else(|| LogicError::MissingSize(s.clone()))?;
                    (1..=n).map(|i| Value::Elem(carrier_element(s, i))).collect()
                }
            };
            sorts.insert(s.clone(), els);
        }
        Ok(Universe { sorts, ints: ints.iter().copied().collect() })
    }
}

/// Integer bounds used when none are given: the literals of the problem, or
/// `{0}` if there are none.
pub fn default_ints(fs: &FormulaSet) -> BTreeSet<i64> {
    let mut ints = fs.int_literals();
    if ints.is_empty() {
        ints.insert(0);
    }
    ints
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Val {
    B(bool),
    I(i64),
    /// Index into the element table.
    E(u32),
}

#[derive(Clone, Debug)]
enum Node {
    Const(Val),
    Var(usize),
    App(usize, Vec<Node>),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Eq(Box<Node>, Box<Node>),
    Cmp(CmpOp, Box<Node>, Box<Node>),
    Ite(Box<Node>, Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

#[derive(Clone, Debug)]
struct Symbol {
    name: Name,
    args: Vec<usize>,
    result: usize,
    offset: usize,
    cells: usize,
}

/// A formula set compiled against a universe.
#[derive(Clone, Debug)]
pub struct Problem {
    elements: Vec<Name>,
    domains: Vec<Vec<Val>>,
    /// Position of each element in its domain.
    elem_pos: Vec<u32>,
    int_pos: BTreeMap<i64, u32>,
    symbols: Vec<Symbol>,
    symbol_index: BTreeMap<Name, usize>,
    sort_dom: BTreeMap<Name, usize>,
    elem_index: BTreeMap<Name, u32>,
    formulas: Vec<(Name, Node)>,
    cells: usize,
    universe: Universe,
}

const BOOL_DOM: usize = 0;
const INT_DOM: usize = 1;

type Tri = Result<Option<Val>, LogicError>;

struct Compiler<'a> {
    sort_dom: &'a BTreeMap<Name, usize>,
    elem_index: &'a BTreeMap<Name, u32>,
    symbol_index: &'a BTreeMap<Name, usize>,
    symbols: &'a [Symbol],
}

impl Compiler<'_> {
    fn domain_of(&self, t: &LType) -> Result<usize, LogicError> {
        match t {
            LType::Boolean => Ok(BOOL_DOM),
            LType::Integer => Ok(INT_DOM),
            LType::Class(n) => {
                self.sort_dom.get(n).copied().ok_or_else(|| LogicError::Unsupported(format!("unknown sort `{n}`")))
            }
            other => {
                Err(LogicError::Unsupported(format!("type {} in finite search", crate::printer::print_type(other))))
            }
        }
    }

    fn compile(&self, e: &Expr, scope: &mut Vec<Name>) -> Result<Node, LogicError> {
        let b = |x: Node| Box::new(x);
        if let Some((head, args)) = e.as_application() {
            let bound = scope.iter().any(|v| v == head);
            if !bound {
                if let Some(&s) = self.symbol_index.get(head) {
                    let sym = &self.symbols[s];
                    if sym.args.len() != args.len() {
                        return Err(LogicError::Unsupported(format!("partial application of `{head}`")));
                    }
                    let args = args.into_iter().map(|a| self.compile(a, scope)).collect::<Result<_, _>>()?;
                    return Ok(Node::App(s, args));
                }
            }
        }
        Ok(match &e.kind {
            ExprKind::Var(v) => match scope.iter().rposition(|x| x == v) {
                Some(i) => Node::Var(i),
                None => match self.elem_index.get(v) {
                    Some(&i) => Node::Const(Val::E(i)),
                    None => return Err(LogicError::Unsupported(format!("unknown symbol `{v}`"))),
                },
            },
            ExprKind::Bool(x) => Node::Const(Val::B(*x)),
            ExprKind::Int(i) => Node::Const(Val::I(*i)),
            ExprKind::Float(_) | ExprKind::Str(_) => {
                return Err(LogicError::Unsupported("float and string values in finite search".into()))
            }
            ExprKind::Not(a) => Node::Not(b(self.compile(a, scope)?)),
            ExprKind::And(x, y) => Node::And(b(self.compile(x, scope)?), b(self.compile(y, scope)?)),
            ExprKind::Or(x, y) => Node::Or(b(self.compile(x, scope)?), b(self.compile(y, scope)?)),
            ExprKind::Implies(x, y) => Node::Implies(b(self.compile(x, scope)?), b(self.compile(y, scope)?)),
            ExprKind::Eq(x, y) => Node::Eq(b(self.compile(x, scope)?), b(self.compile(y, scope)?)),
            ExprKind::Cmp(op, x, y) => Node::Cmp(*op, b(self.compile(x, scope)?), b(self.compile(y, scope)?)),
            ExprKind::Ite(c, t, f) => {
                Node::Ite(b(self.compile(c, scope)?), b(self.compile(t, scope)?), b(self.compile(f, scope)?))
            }
            ExprKind::Forall(v, t, body) | ExprKind::Exists(v, t, body) => {
                let d = self.domain_of(t)?;
                scope.push(v.clone());
                let inner = self.compile(body, scope);
                scope.pop();
                if matches!(e.kind, ExprKind::Forall(..)) {
                    Node::Forall(d, b(inner?))
                } else {
                    Node::Exists(d, b(inner?))
                }
            }
            ExprKind::App(..) | ExprKind::Field(..) | ExprKind::Lambda(..) => {
                return Err(LogicError::Unsupported(format!(
                    "expression `{}` in finite search",
                    crate::printer::print_expr(e)
                )))
            }
        })
    }
}

fn kleene_not(a: Option<bool>) -> Option<bool> {
    a.map(|x| !x)
}

fn as_bool(v: Option<Val>) -> Option<bool> {
    match v {
        Some(Val::B(b)) => Some(b),
        _ => None,
    }
}

impl Problem {
    pub fn new(fs: &FormulaSet, universe: &Universe) -> Result<Problem, LogicError> {
        let mut elements: Vec<Name> = Vec::new();
        let mut elem_index = BTreeMap::new();
        let mut elem_pos = Vec::new();
        let mut domains = vec![vec![Val::B(false), Val::B(true)], universe.ints.iter().map(|i| Val::I(*i)).collect()];
        let mut sort_dom = BTreeMap::new();
        for (s, els) in &universe.sorts {
            let mut dom = Vec::new();
            for (pos, v) in els.iter().enumerate() {
                let Value::Elem(n) = v else {
                    return Err(LogicError::Unsupported(format!("non-element value in sort `{s}`")));
                };
                let id = elements.len() as u32;
                if elem_index.insert(n.clone(), id).is_some() {
                    return Err(LogicError::Unsupported(format!("element `{n}` in several sorts")));
                }
                elements.push(n.clone());
                elem_pos.push(pos as u32);
                dom.push(Val::E(id));
            }
            sort_dom.insert(s.clone(), domains.len());
            domains.push(dom);
        }
        let int_pos = universe.ints.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();

        let mut symbols = Vec::new();
        let mut symbol_index = BTreeMap::new();
        let mut offset = 0;
        {
            let c =
                Compiler { sort_dom: &sort_dom, elem_index: &elem_index, symbol_index: &BTreeMap::new(), symbols: &[] };
            for (n, t) in &fs.decls {
                let (args, res) = t.uncurry();
                let args = args.iter().map(|a| c.domain_of(a)).collect::<Result<Vec<_>, _>>()?;
                let result = c.domain_of(res)?;
                let cells = args.iter().map(|d| domains[*d].len()).product();
                symbol_index.insert(n.clone(), symbols.len());
                symbols.push(Symbol { name: n.clone(), args, result, offset, cells });
                offset += cells;
            }
        }
        let mut p = Problem {
            elements,
            domains,
            elem_pos,
            int_pos,
            symbols,
            symbol_index,
            sort_dom,
            elem_index,
            formulas: Vec::new(),
            cells: offset,
            universe: universe.clone(),
        };
        p.formulas =
            fs.formulas.iter().map(|(o, f)| Ok((o.clone(), p.compile(f)?))).collect::<Result<Vec<_>, LogicError>>()?;
        Ok(p)
    }

    fn compile(&self, e: &Expr) -> Result<Node, LogicError> {
        let c = Compiler {
            sort_dom: &self.sort_dom,
            elem_index: &self.elem_index,
            symbol_index: &self.symbol_index,
            symbols: &self.symbols,
        };
        c.compile(e, &mut Vec::new())
    }

    /// Three-valued truth value of a closed formula under an assignment.
    /// Carrier elements and enumeration constants may occur as names.
    pub fn eval_closed(&self, e: &Expr, asg: &[Option<u32>]) -> Result<Option<bool>, LogicError> {
        let n = self.compile(e)?;
        Ok(as_bool(self.eval(&n, &mut Vec::new(), asg)?))
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    fn position(&self, dom: usize, v: Val) -> Result<usize, LogicError> {
        match v {
            Val::B(b) => Ok(b as usize),
            Val::I(i) => self.int_pos.get(&i).map(|p| *p as usize).ok_or(LogicError::IntOutOfBounds(i)),
            Val::E(e) => {
                let p = self.elem_pos[e as usize] as usize;
                if self.domains[dom].get(p) == Some(&v) {
                    Ok(p)
                } else {
                    Err(LogicError::Unsupported(format!("element `{}` outside its sort", self.elements[e as usize])))
                }
            }
        }
    }

    fn eval(&self, n: &Node, env: &mut Vec<Val>, asg: &[Option<u32>]) -> Tri {
        Ok(match n {
            Node::Const(v) => Some(*v),
            Node::Var(i) => Some(env[*i]),
            Node::App(s, args) => {
                let sym = &self.symbols[*s];
                let mut idx = 0;
                for (a, d) in args.iter().zip(&sym.args) {
                    let Some(v) = self.eval(a, env, asg)? else { return Ok(None) };
                    idx = idx * self.domains[*d].len() + self.position(*d, v)?;
                }
                asg[sym.offset + idx].map(|k| self.domains[sym.result][k as usize])
            }
            Node::Not(a) => kleene_not(as_bool(self.eval(a, env, asg)?)).map(Val::B),
            Node::And(a, b) => {
                let x = as_bool(self.eval(a, env, asg)?);
                if x == Some(false) {
                    return Ok(Some(Val::B(false)));
                }
                let y = as_bool(self.eval(b, env, asg)?);
                match (x, y) {
                    (_, Some(false)) => Some(Val::B(false)),
                    (Some(true), Some(true)) => Some(Val::B(true)),
                    _ => None,
                }
            }
            Node::Or(a, b) => {
                let x = as_bool(self.eval(a, env, asg)?);
                if x == Some(true) {
                    return Ok(Some(Val::B(true)));
                }
                let y = as_bool(self.eval(b, env, asg)?);
                match (x, y) {
                    (_, Some(true)) => Some(Val::B(true)),
                    (Some(false), Some(false)) => Some(Val::B(false)),
                    _ => None,
                }
            }
            Node::Implies(a, b) => {
                let x = as_bool(self.eval(a, env, asg)?);
                if x == Some(false) {
                    return Ok(Some(Val::B(true)));
                }
                let y = as_bool(self.eval(b, env, asg)?);
                match (x, y) {
                    (_, Some(true)) => Some(Val::B(true)),
                    (Some(true), Some(false)) => Some(Val::B(false)),
                    _ => None,
                }
            }
            Node::Eq(a, b) => {
                let x = self.eval(a, env, asg)?;
                let y = self.eval(b, env, asg)?;
                x.zip(y).map(|(x, y)| Val::B(x == y))
            }
            Node::Cmp(op, a, b) => {
                let x = self.eval(a, env, asg)?;
                let y = self.eval(b, env, asg)?;
                match (x, y) {
                    (Some(Val::I(x)), Some(Val::I(y))) => Some(Val::B(op.holds(x, y))),
                    _ => None,
                }
            }
            Node::Ite(c, t, f) => match as_bool(self.eval(c, env, asg)?) {
                Some(true) => self.eval(t, env, asg)?,
                Some(false) => self.eval(f, env, asg)?,
                None => {
                    let x = self.eval(t, env, asg)?;
                    let y = self.eval(f, env, asg)?;
                    if x.is_some() && x == y {
                        x
                    } else {
                        None
                    }
                }
            },
            Node::Forall(d, body) | Node::Exists(d, body) => {
                let universal = matches!(n, Node::Forall(..));
                let mut unknown = false;
                for &v in &self.domains[*d] {
                    env.push(v);
                    let r = self.eval(body, env, asg).map(as_bool);
                    env.pop();
                    match r? {
                        Some(b) if b != universal => return Ok(Some(Val::B(b))),
                        Some(_) => {}
                        None => unknown = true,
                    }
                }
                if unknown {
                    None
                } else {
                    Some(Val::B(universal))
                }
            }
        })
    }

    /// Three-valued value of every formula under a partial assignment.
    fn status(&self, asg: &[Option<u32>]) -> Result<Option<bool>, LogicError> {
        let mut all_true = true;
        let mut env = Vec::new();
        for (_, f) in &self.formulas {
            match as_bool(self.eval(f, &mut env, asg)?) {
                Some(false) => return Ok(Some(false)),
                Some(true) => {}
                None => all_true = false,
            }
        }
        Ok(all_true.then_some(true))
    }

    fn cell_domain(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        for s in &self.symbols {
            out.extend(std::iter::repeat_n(s.result, s.cells));
        }
        out
    }

    fn arg_tuple(&self, sym: &Symbol, mut idx: usize) -> Vec<Val> {
        let mut out = vec![Val::B(false); sym.args.len()];
        for (slot, d) in sym.args.iter().enumerate().rev() {
            let n = self.domains[*d].len();
            out[slot] = self.domains[*d][idx % n];
            idx /= n;
        }
        out
    }

    fn value(&self, v: Val) -> Value {
        match v {
            Val::B(b) => Value::Bool(b),
            Val::I(i) => Value::Int(i),
            Val::E(e) => Value::Elem(self.elements[e as usize].clone()),
        }
    }

    fn to_val(&self, v: &Value) -> Result<Val, LogicError> {
        Ok(match v {
            Value::Bool(b) => Val::B(*b),
            Value::Int(i) => Val::I(*i),
            Value::Elem(n) => Val::E(
                self.elements
                    .iter()
                    .position(|e| e == n)
                    .ok_or_else(|| LogicError::Unsupported(format!("unknown element `{n}`")))? as u32,
            ),
        })
    }

    fn interpretation(&self, asg: &[Option<u32>]) -> Interpretation {
        let mut m = Interpretation { sorts: self.universe.sorts.clone(), tables: BTreeMap::new() };
        for sym in &self.symbols {
            let rows = (0..sym.cells)
                .map(|i| {
                    let args = self.arg_tuple(sym, i).into_iter().map(|v| self.value(v)).collect();
                    let k = asg[sym.offset + i].expect("complete assignment");
                    (args, self.value(self.domains[sym.result][k as usize]))
                })
                .collect();
            m.tables.insert(sym.name.clone(), rows);
        }
        m
    }

    /// Cell assignment of the symbols of this problem that `m` interprets.
    /// Cells of symbols absent from `m` stay open.
    pub fn assignment(&self, m: &Interpretation) -> Result<Vec<Option<u32>>, LogicError> {
        let mut asg = vec![None; self.cells];
        for sym in &self.symbols {
            let Some(rows) = m.tables.get(&sym.name) else { continue };
            for (args, v) in rows {
                let mut idx = 0;
                for (a, d) in args.iter().zip(&sym.args) {
                    idx = idx * self.domains[*d].len() + self.position(*d, self.to_val(a)?)?;
                }
                let val = self.to_val(v)?;
                asg[sym.offset + idx] = Some(self.position(sym.result, val)? as u32);
            }
        }
        Ok(asg)
    }

    /// Formulas that are not true in `m`, which must interpret every symbol.
    pub fn violated(&self, m: &Interpretation) -> Result<Vec<Name>, LogicError> {
        let asg = self.assignment(m)?;
        let mut out = Vec::new();
        let mut env = Vec::new();
        for (o, f) in &self.formulas {
            if as_bool(self.eval(f, &mut env, &asg)?) != Some(true) {
                out.push(o.clone());
            }
        }
        Ok(out)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.symbol_index.contains_key(name)
    }

    /// Depth-first search below a fixed prefix. Returns the models found (up
    /// to `limit`) and the number of nodes visited; stops when more than
    /// `budget` nodes are visited.
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        asg: &mut Vec<Option<u32>>,
        pins: &[Option<u32>],
        doms: &[usize],
        depth: usize,
        budget: u64,
        limit: usize,
        out: &mut Vec<Interpretation>,
        nodes: &mut u64,
    ) -> Result<(), LogicError> {
        *nodes += 1;
        if *nodes > budget || out.len() >= limit {
            return Ok(());
        }
        match self.status(asg)? {
            Some(false) => return Ok(()),
            Some(true) if depth == self.cells => {
                out.push(self.interpretation(asg));
                return Ok(());
            }
            _ if depth == self.cells => return Ok(()),
            _ => {}
        }
        let choices: Vec<u32> = match pins[depth] {
            Some(p) => vec![p],
            None => (0..self.domains[doms[depth]].len() as u32).collect(),
        };
        for v in choices {
            asg[depth] = Some(v);
            self.dfs(asg, pins, doms, depth + 1, budget, limit, out, nodes)?;
            if *nodes > budget || out.len() >= limit {
                break;
            }
        }
        asg[depth] = None;
        Ok(())
    }

    /// All models extending the pinned cells, in lexicographic order of the
    /// cell assignment. The search space is split into prefixes explored in
    /// parallel; the results are merged so that output and resource
    /// accounting equal those of a sequential search.
    pub fn search(
        &self,
        pins: &[Option<u32>],
        budget: u64,
        limit: Option<usize>,
    ) -> Result<Vec<Interpretation>, LogicError> {
        let limit = limit.unwrap_or(usize::MAX);
        let doms = self.cell_domain();
        let mut depth = 0;
        let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
        while depth < self.cells && prefixes.len() < 16 {
            let choices: Vec<u32> = match pins[depth] {
                Some(p) => vec![p],
                None => (0..self.domains[doms[depth]].len() as u32).collect(),
            };
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(*c);
                        q
                    })
                })
                .collect();
            depth += 1;
        }
        let results: Vec<Result<(Vec<Interpretation>, u64), LogicError>> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut asg: Vec<Option<u32>> = vec![None; self.cells];
                for (i, v) in prefix.iter().enumerate() {
                    asg[i] = Some(*v);
                }
                let mut out = Vec::new();
                let mut nodes = 0;
                self.dfs(&mut asg, pins, &doms, depth, budget, limit, &mut out, &mut nodes)?;
                Ok((out, nodes))
            })
            .collect();
        let mut models = Vec::new();
        let mut total: u64 = 0;
        for r in results {
            let (ms, nodes) = r?;
            total += nodes;
            if total > budget {
                return Err(LogicError::ResourceCap(budget));
            }
            for m in ms {
                if models.len() < limit {
                    models.push(m);
                }
            }
            if models.len() >= limit {
                break;
            }
        }
        Ok(models)
    }

    pub fn unpinned(&self) -> Vec<Option<u32>> {
        vec![None; self.cells]
    }
}

/// Search parameters: carrier sizes, integer range (defaults to the
/// literals of the problem), node budget and maximal number of models.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub sizes: BTreeMap<Name, usize>,
    pub ints: Option<BTreeSet<i64>>,
    pub budget: u64,
    pub limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { sizes: BTreeMap::new(), ints: None, budget: DEFAULT_BUDGET, limit: None }
    }
}

impl SearchOptions {
    pub fn with_sizes<'a>(sizes: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        SearchOptions { sizes: sizes.into_iter().map(|(s, n)| (Name::from(s), n)).collect(), ..Default::default() }
    }

    pub fn universe(&self, fs: &FormulaSet) -> Result<Universe, LogicError> {
        let ints = self.ints.clone().unwrap_or_else(|| default_ints(fs));
        Universe::new(fs, &self.sizes, &ints)
    }
}

/// All models of `fs` over the carriers given by `opts`, in a canonical
/// order independent of the number of worker threads.
pub fn enumerate_models(fs: &FormulaSet, opts: &SearchOptions) -> Result<Vec<Interpretation>, LogicError> {
    let u = opts.universe(fs)?;
    let p = Problem::new(fs, &u)?;
    p.search(&p.unpinned(), opts.budget, opts.limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{rules_to_formulas, Inversions};
    use crate::parser::{parse_expr, parse_module};

    fn fs(src: &str, formulas: &[&str]) -> FormulaSet {
        let m = parse_module(src).unwrap();
        let mut fs = rules_to_formulas(&m, Inversions::Off).unwrap();
        for (i, f) in formulas.iter().enumerate() {
            fs.formulas.push((Name::from(format!("f{i}")), parse_expr(f).unwrap()));
        }
        fs
    }

    #[test]
    fn forced_table() {
        let f = fs("class A\ndecl P : A -> Boolean", &["forall x: A. P x"]);
        let ms = enumerate_models(&f, &SearchOptions::with_sizes([("A", 1)])).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].extension("P").len(), 1);
    }

    #[test]
    fn liar_has_no_models() {
        let f = fs("decl P : Boolean", &["P --> not P", "not P --> P"]);
        assert!(enumerate_models(&f, &SearchOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn free_predicate_counts() {
        let f = fs("class A\ndecl P : A -> Boolean", &[]);
        // isA is forced, P free over two elements
        assert_eq!(enumerate_models(&f, &SearchOptions::with_sizes([("A", 2)])).unwrap().len(), 4);
    }

    #[test]
    fn integer_functions_range_over_bounds() {
        let f = fs("decl c : Integer", &["c > 1"]);
        let mut o = SearchOptions::default();
        o.ints = Some([0, 1, 2, 3].into_iter().collect());
        let ms = enumerate_models(&f, &o).unwrap();
        let vals: Vec<&Value> = ms.iter().map(|m| m.value("c", &[]).unwrap()).collect();
        assert_eq!(vals, [&Value::Int(2), &Value::Int(3)]);
    }

    #[test]
    fn literal_outside_bounds_is_reported() {
        let f = fs("decl P : Integer -> Boolean", &["P 7"]);
        let mut o = SearchOptions::default();
        o.ints = Some([0].into_iter().collect());
        assert_eq!(enumerate_models(&f, &o), Err(LogicError::IntOutOfBounds(7)));
    }

    #[test]
    fn budget_is_distinct_from_no_models() {
        let f = fs("class A\ndecl P : A -> Boolean", &[]);
        let mut o = SearchOptions::with_sizes([("A", 3)]);
        o.budget = 5;
        assert_eq!(enumerate_models(&f, &o), Err(LogicError::ResourceCap(5)));
    }

    #[test]
    fn missing_size() {
        let f = fs("class A", &[]);
        assert_eq!(enumerate_models(&f, &SearchOptions::default()), Err(LogicError::MissingSize("A".into())));
    }

    #[test]
    fn limit_takes_first_in_order() {
        let f = fs("class A\ndecl P : A -> Boolean", &[]);
        let all = enumerate_models(&f, &SearchOptions::with_sizes([("A", 2)])).unwrap();
        let mut o = SearchOptions::with_sizes([("A", 2)]);
        o.limit = Some(2);
        assert_eq!(enumerate_models(&f, &o).unwrap(), all[..2].to_vec());
    }
}
