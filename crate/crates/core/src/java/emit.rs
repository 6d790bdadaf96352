//! Turns one parsed file plus the project index into nodes and edges.

use std::collections::{BTreeMap, HashSet};

use super::body::{Seed, Walker};
use super::index::{Ctx, FileUnit, Index, Scope, Target, TypeId};
use super::lexer::Token;
use super::parser::{Body, Member, MethodDecl, Span, TypeDecl, TypeRef};
use crate::model::{EdgeKind, Location, NodeKind, SemanticEdge, SemanticNode};

/// Nodes and edges produced for one source file.
#[derive(Debug, Default)]
pub struct FileOut {
    pub file_uri: String,
    pub package: String,
    pub nodes: Vec<SemanticNode>,
    pub edges: Vec<SemanticEdge>,
    pub stubs: BTreeMap<String, NodeKind>,
    pub unresolved: usize,
    used: HashSet<String>,
}

fn tok_loc(t: &Token) -> Location {
    Location::new(t.line, t.col, t.end_line, t.end_col)
}

fn span_loc(toks: &[Token], span: Span) -> Location {
    let a = &toks[span.0];
    let b = &toks[span.1.max(span.0 + 1) - 1];
    Location::new(a.line, a.col, b.end_line, b.end_col)
}

impl FileOut {
    pub fn edge(&mut self, from: String, to: String, kind: EdgeKind, at: Option<&Token>) {
        let mut e = SemanticEdge::new(from, to, kind);
        if let Some(t) = at {
            e = e.with_location(tok_loc(t));
        }
        self.edges.push(e);
    }

    /// Records an external symbol. A member stub also records its owner class.
    pub fn stub(&mut self, id: String, kind: NodeKind) {
        if matches!(kind, NodeKind::Method | NodeKind::Constructor | NodeKind::Field) {
            let bare = id.strip_suffix("().").or_else(|| id.strip_suffix('.')).unwrap_or(&id);
            if let Some((owner, _)) = bare.rsplit_once('.') {
                self.stubs.entry(owner.to_string()).or_insert(NodeKind::Class);
            }
        }
        self.stubs.entry(id).or_insert(kind);
    }

    fn node(&mut self, id: String, kind: NodeKind, display: &str, loc: Location) -> String {
        let id = if self.used.insert(id.clone()) {
            id
        } else {
            (1..).map(|k| format!("{id}#{k}")).find(|c| self.used.insert(c.clone())).expect("free id")
        };
        self.nodes.push(SemanticNode::located(id.clone(), kind, display, self.package.clone(), self.file_uri.clone(), loc));
        id
    }

    /// A node declared at a single name token (parameter, local, type parameter).
    pub fn local_node(&mut self, id: String, kind: NodeKind, t: &Token) -> String {
        self.node(id, kind, &t.text, tok_loc(t))
    }

    /// TYPE edges from `from` to the type and every type argument of `r`.
    pub fn type_edges(&mut self, idx: &Index, from: &str, r: &TypeRef, ctx: &Ctx) {
        if !r.is_primitive() && !r.is_var() {
            match idx.resolve_ref(r, ctx) {
                Some(Target::Type(t)) => {
                    let to = idx.types[t].id.clone();
                    self.edge(from.to_string(), to, EdgeKind::Type, None);
                }
                Some(Target::TypeParam(id)) => self.edge(from.to_string(), id, EdgeKind::Type, None),
                Some(Target::External(f)) => {
                    self.stub(f.clone(), NodeKind::Class);
                    self.edge(from.to_string(), f, EdgeKind::Type, None);
                }
                None => self.unresolved += 1,
            }
        }
        for a in &r.args {
            self.type_edges(idx, from, a, ctx);
        }
    }
}

pub struct Emitter<'a> {
    idx: &'a Index,
    unit: &'a FileUnit,
    file: usize,
    pub out: FileOut,
}

impl<'a> Emitter<'a> {
    pub fn new(idx: &'a Index, unit: &'a FileUnit, file: usize) -> Self {
        let out = FileOut { file_uri: unit.rel.clone(), package: unit.cu.package.clone(), ..Default::default() };
        Emitter { idx, unit, file, out }
    }

    fn toks(&self) -> &'a [Token] {
        &self.unit.toks
    }

    pub fn run(mut self) -> FileOut {
        let rel = self.unit.rel.clone();
        let display = rel.rsplit('/').next().unwrap_or(&rel).to_string();
        let loc = Location::new(0, 0, self.unit.line_count.saturating_sub(1), self.unit.last_line_len);
        let file_id = self.out.node(rel, NodeKind::File, &display, loc);
        for decl in &self.unit.cu.types {
            let t = self.type_id(decl);
            self.out.edge(file_id.clone(), self.idx.types[t].id.clone(), EdgeKind::Declaration, None);
            self.emit_type(decl, t);
        }
        self.out
    }

    fn type_id(&self, decl: &TypeDecl) -> TypeId {
        self.idx.type_at[&(self.file, decl.name_tok)]
    }

    fn emit_type(&mut self, decl: &TypeDecl, t: TypeId) {
        let idx = self.idx;
        let info = &idx.types[t];
        let id = info.id.clone();
        let loc = span_loc(self.toks(), decl.span);
        self.out.node(id.clone(), info.kind.clone(), &decl.name, loc);

        for (p, (_, pid)) in decl.type_params.iter().zip(&info.tparams) {
            let pid = self.out.local_node(pid.clone(), NodeKind::TypeParameter, &self.toks()[p.tok]);
            self.out.edge(id.clone(), pid, EdgeKind::Declaration, None);
        }
        for s in &info.supers {
            match s {
                Target::Type(st) => self.out.edge(id.clone(), idx.types[*st].id.clone(), EdgeKind::Extend, None),
                Target::External(f) => {
                    self.out.stub(f.clone(), NodeKind::Class);
                    self.out.edge(id.clone(), f.clone(), EdgeKind::Extend, None);
                }
                Target::TypeParam(_) => {}
            }
        }
        let type_ctx = idx.type_ctx(t);
        for c in &decl.enum_constants {
            let (ft, f) = idx.field_at[&(self.file, c.tok)];
            let fid = idx.types[ft].fields[f].id.clone();
            let loc = span_loc(self.toks(), c.span);
            self.out.node(fid.clone(), NodeKind::Field, &c.name, loc);
            self.out.edge(id.clone(), fid, EdgeKind::Declaration, None);
            if let Some(args) = &c.args {
                self.walk_type_owned(t, args);
            }
            if !c.body.is_empty() {
                // constant bodies are anonymous classes owned by the enum
                let open = c.args.as_ref().map_or(c.tok + 1, |a| a.span.1);
                let prefix = format!("{id}.");
                let mut w = Walker::new(idx, self.toks(), type_ctx.clone(), id.clone(), prefix, &mut self.out, Vec::new(), &[]);
                w.run_anon(open);
            }
        }
        for m in &decl.members {
            match m {
                Member::Field(fd) => {
                    for v in &fd.vars {
                        let (ft, f) = idx.field_at[&(self.file, v.tok)];
                        let fid = idx.types[ft].fields[f].id.clone();
                        let loc = span_loc(self.toks(), fd.span);
                        self.out.node(fid.clone(), NodeKind::Field, &v.name, loc);
                        self.out.edge(id.clone(), fid.clone(), EdgeKind::Declaration, None);
                        self.out.type_edges(idx, &fid, &fd.ty, &type_ctx);
                        if let Some(init) = &v.init {
                            self.emit_local_types(&id, init);
                            self.walk_type_owned(t, init);
                        }
                    }
                }
                Member::Method(md) => self.emit_method(md, t),
                Member::Type(inner) => {
                    let it = self.type_id(inner);
                    self.out.edge(id.clone(), idx.types[it].id.clone(), EdgeKind::Declaration, None);
                    self.emit_type(inner, it);
                }
                Member::Initializer(body) => {
                    self.emit_local_types(&id, body);
                    self.walk_type_owned(t, body);
                }
            }
        }
    }

    fn emit_local_types(&mut self, parent: &str, body: &Body) {
        for lt in &body.local_types {
            let ltid = self.type_id(lt);
            self.out.edge(parent.to_string(), self.idx.types[ltid].id.clone(), EdgeKind::Declaration, None);
            self.emit_type(lt, ltid);
        }
    }

    /// Code in initializers belongs to the type; its locals are `Type.x?line`.
    fn walk_type_owned(&mut self, t: TypeId, body: &Body) {
        let id = self.idx.types[t].id.clone();
        let scope = Scope { tparams: Vec::new(), types: self.local_type_ids(body) };
        let ctx = Ctx { file: self.file, ty: Some(t), scope };
        let spans: Vec<Span> = body.local_types.iter().map(|d| d.span).collect();
        self.walk_span(&id, &format!("{id}."), ctx, body.span, &spans, Vec::new());
    }

    fn local_type_ids(&self, body: &Body) -> Vec<(String, TypeId)> {
        body.local_types.iter().map(|d| (d.name.clone(), self.type_id(d))).collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_span(&mut self, owner: &str, prefix: &str, ctx: Ctx, span: Span, locals: &[Span], seeds: Vec<Seed>) {
        if span.0 >= span.1 {
            return;
        }
        let mut w = Walker::new(self.idx, self.toks(), ctx, owner.to_string(), prefix.to_string(), &mut self.out, seeds, locals);
        w.run(span);
    }

    fn emit_method(&mut self, md: &MethodDecl, t: TypeId) {
        let idx = self.idx;
        let (mt, m) = idx.method_at[&(self.file, md.name_tok)];
        let mi = &idx.types[mt].methods[m];
        let mid = mi.id.clone();
        let kind = if md.is_ctor { NodeKind::Constructor } else { NodeKind::Method };
        let loc = span_loc(self.toks(), md.span);
        self.out.node(mid.clone(), kind, &md.name, loc);
        let tid = idx.types[t].id.clone();
        self.out.edge(tid, mid.clone(), EdgeKind::Declaration, None);

        for (p, (_, pid)) in md.type_params.iter().zip(&mi.tparams) {
            let pid = self.out.local_node(pid.clone(), NodeKind::TypeParameter, &self.toks()[p.tok]);
            self.out.edge(mid.clone(), pid, EdgeKind::Declaration, None);
        }
        let ctx = idx.method_ctx(mt, m);
        if let Some(r) = &md.ret {
            self.out.type_edges(idx, &mid, r, &ctx);
        }
        let mut seeds = Vec::new();
        for p in &md.params {
            let pid = self.out.local_node(format!("{mid}({})", p.name), NodeKind::Parameter, &self.toks()[p.tok]);
            self.out.edge(mid.clone(), pid.clone(), EdgeKind::Declaration, None);
            self.out.type_edges(idx, &pid, &p.ty, &ctx);
            seeds.push(Seed { name: p.name.clone(), id: pid, ty: idx.ty_of(Some(&p.ty), p.ty.dims, &ctx) });
        }
        if !md.is_ctor {
            for st in idx.project_supers(t) {
                let hit = idx.walk_supers_ids(st).into_iter().find_map(|c| {
                    idx.types[c]
                        .methods
                        .iter()
                        .find(|o| !o.is_ctor && o.name == md.name && o.arity == md.params.len())
                        .map(|o| o.id.clone())
                });
                if let Some(target) = hit {
                    self.out.edge(mid.clone(), target, EdgeKind::Override, None);
                }
            }
        }
        if let Some(body) = &md.body {
            self.emit_local_types(&mid, body);
            let spans: Vec<Span> = body.local_types.iter().map(|d| d.span).collect();
            self.walk_span(&mid, &mid, ctx, body.span, &spans, seeds);
        }
    }
}
