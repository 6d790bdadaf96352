//! Project-wide symbol index: every declared type with its members, and
//! name resolution for types, fields and methods.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::lexer::Token;
use super::parser::{Body, CompilationUnit, Import, Member, MethodDecl, TypeDecl, TypeRef};
use crate::model::NodeKind;

pub type TypeId = usize;

/// Names from `java.lang` that resolve without an import.
pub const JAVA_LANG: &[&str] = &[
    "AbstractMethodError", "Appendable", "ArithmeticException", "ArrayIndexOutOfBoundsException",
    "ArrayStoreException", "AssertionError", "AutoCloseable", "Boolean", "Byte", "CharSequence", "Character",
    "Class", "ClassCastException", "ClassLoader", "ClassNotFoundException", "CloneNotSupportedException",
    "Cloneable", "Comparable", "Deprecated", "Double", "Enum", "Error", "Exception", "Float",
    "FunctionalInterface", "IllegalAccessException", "IllegalArgumentException", "IllegalStateException",
    "IndexOutOfBoundsException", "InstantiationException", "Integer", "InterruptedException", "Iterable",
    "LinkageError", "Long", "Math", "NegativeArraySizeException", "NoSuchFieldException",
    "NoSuchMethodException", "NullPointerException", "Number", "NumberFormatException", "Object",
    "OutOfMemoryError", "Override", "Process", "ProcessBuilder", "Readable", "Record",
    "ReflectiveOperationException", "Runnable", "Runtime", "RuntimeException", "SafeVarargs",
    "SecurityException", "Short", "StackOverflowError", "StrictMath", "String", "StringBuffer",
    "StringBuilder", "StringIndexOutOfBoundsException", "SuppressWarnings", "System", "Thread",
    "ThreadLocal", "Throwable", "TypeNotPresentException", "UnsupportedOperationException", "Void",
    "VirtualMachineError",
];

/// Methods every reference type inherits from `java.lang.Object`.
pub const OBJECT_METHODS: &[&str] =
    &["equals", "hashCode", "toString", "getClass", "clone", "finalize", "notify", "notifyAll", "wait"];

/// What a type name resolves to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Type(TypeId),
    TypeParam(String),
    External(String),
}

/// Static type of an expression, as far as it can be told.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Type(TypeId),
    External(String),
    Array,
    Unknown,
}

#[derive(Debug, Clone, Default)]
pub struct Scope {
    pub tparams: Vec<(String, String)>,
    pub types: Vec<(String, TypeId)>,
}

#[derive(Debug, Clone)]
pub struct FieldInfo {
    pub name: String,
    pub id: String,
    pub ty: Option<TypeRef>,
    pub dims: u32,
}

#[derive(Debug, Clone)]
pub struct MethodInfo {
    pub name: String,
    pub id: String,
    pub arity: usize,
    pub varargs: bool,
    pub is_ctor: bool,
    pub ret: Option<TypeRef>,
    pub tparams: Vec<(String, String)>,
    /// Local types declared in the body.
    pub locals: Vec<(String, TypeId)>,
}

impl MethodInfo {
    pub fn accepts(&self, arity: usize) -> bool {
        arity == self.arity || (self.varargs && arity + 1 >= self.arity)
    }
}

#[derive(Debug, Clone)]
pub struct TypeInfo {
    pub id: String,
    /// Qualified name for member and top-level types; local types have none.
    pub fqn: Option<String>,
    pub kind: NodeKind,
    pub simple: String,
    pub file: usize,
    pub outer: Option<TypeId>,
    pub tparams: Vec<(String, String)>,
    /// Set for local types: what the enclosing body makes visible.
    pub local_scope: Option<Scope>,
    pub member_types: BTreeMap<String, TypeId>,
    pub fields: Vec<FieldInfo>,
    pub methods: Vec<MethodInfo>,
    pub supers: Vec<Target>,
    pub superclass: Option<Target>,
    raw_supers: Vec<TypeRef>,
    raw_superclass: Option<TypeRef>,
}

#[derive(Debug)]
pub struct FileUnit {
    pub rel: String,
    pub toks: Vec<Token>,
    pub cu: CompilationUnit,
    pub line_count: u32,
    pub last_line_len: u32,
}

/// Name-resolution context for code at some point in a file.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub file: usize,
    pub ty: Option<TypeId>,
    pub scope: Scope,
}

#[derive(Debug, Default)]
pub struct Index {
    pub types: Vec<TypeInfo>,
    pub by_fqn: HashMap<String, TypeId>,
    /// (file, name token) of a declaration → its type / method / field.
    pub type_at: HashMap<(usize, usize), TypeId>,
    pub method_at: HashMap<(usize, usize), (TypeId, usize)>,
    pub field_at: HashMap<(usize, usize), (TypeId, usize)>,
    pub packages: HashSet<String>,
    pub files: Vec<(String, Vec<Import>)>,
    used_ids: HashSet<String>,
}

fn unique(used: &mut HashSet<String>, base: String) -> String {
    if used.insert(base.clone()) {
        return base;
    }
    let mut k = 1;
    loop {
        let id = format!("{base}#{k}");
        if used.insert(id.clone()) {
            return id;
        }
        k += 1;
    }
}

impl Index {
    pub fn build(files: &[FileUnit]) -> Index {
        let mut idx = Index::default();
        for (f, unit) in files.iter().enumerate() {
            idx.packages.insert(unit.cu.package.clone());
            idx.files.push((unit.cu.package.clone(), unit.cu.imports.clone()));
            for decl in &unit.cu.types {
                let fqn = qualify(&unit.cu.package, &decl.name);
                idx.register(f, decl, None, fqn.clone(), Some(fqn), None);
            }
        }
        // supers are resolved outermost first so member-type lookups through
        // already-resolved supertypes work for nested declarations
        let mut order: Vec<TypeId> = (0..idx.types.len()).collect();
        order.sort_by_key(|&t| (idx.depth(t), t));
        for t in order {
            let supers = std::mem::take(&mut idx.types[t].raw_supers);
            let superclass = idx.types[t].raw_superclass.take();
            let ctx = idx.super_ctx(t);
            let resolved: Vec<Target> = supers.iter().filter_map(|r| idx.resolve_ref(r, &ctx)).collect();
            let sc = superclass.as_ref().and_then(|r| idx.resolve_ref(r, &ctx));
            idx.types[t].supers = resolved;
            idx.types[t].superclass = sc;
        }
        idx
    }

    fn depth(&self, mut t: TypeId) -> usize {
        let mut d = 0;
        while let Some(o) = self.types[t].outer {
            d += 1;
            t = o;
        }
        d
    }

    fn register(
        &mut self,
        file: usize,
        decl: &TypeDecl,
        outer: Option<TypeId>,
        base_id: String,
        fqn: Option<String>,
        local_scope: Option<Scope>,
    ) -> TypeId {
        let id = unique(&mut self.used_ids, base_id);
        let t = self.types.len();
        let tparams = decl.type_params.iter().map(|p| (p.name.clone(), format!("{id}.{}", p.name))).collect();
        self.types.push(TypeInfo {
            id: id.clone(),
            fqn: fqn.clone(),
            kind: decl.kind.clone(),
            simple: decl.name.clone(),
            file,
            outer,
            tparams,
            local_scope,
            member_types: BTreeMap::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            supers: Vec::new(),
            superclass: None,
            raw_supers: decl.supers.clone(),
            raw_superclass: decl.superclass.clone(),
        });
        if let Some(fqn) = &fqn {
            self.by_fqn.entry(fqn.clone()).or_insert(t);
        }
        self.type_at.insert((file, decl.name_tok), t);

        for c in &decl.enum_constants {
            self.add_field(file, t, &c.name, c.tok, None, 0);
        }
        let mut overloads: HashMap<String, usize> = HashMap::new();
        for m in &decl.members {
            match m {
                Member::Field(fd) => {
                    for v in &fd.vars {
                        self.add_field(file, t, &v.name, v.tok, Some(fd.ty.clone()), fd.ty.dims + v.dims);
                    }
                }
                Member::Method(md) => {
                    let n = overloads.entry(format!("{}{}", md.is_ctor, md.name)).or_default();
                    let mid = if *n == 0 { format!("{id}.{}().", md.name) } else { format!("{id}.{}(+{n}).", md.name) };
                    *n += 1;
                    self.add_method(file, t, md, mid);
                }
                Member::Type(inner) => {
                    let inner_fqn = fqn.as_ref().map(|f| format!("{f}.{}", inner.name));
                    let it = self.register(file, inner, Some(t), format!("{id}.{}", inner.name), inner_fqn, None);
                    self.types[t].member_types.insert(inner.name.clone(), it);
                }
                Member::Initializer(body) => {
                    let scope = Scope { tparams: Vec::new(), types: Vec::new() };
                    self.register_locals(file, t, body, &format!("{id}."), scope);
                }
            }
        }
        for fd in decl.members.iter().filter_map(|m| if let Member::Field(f) = m { Some(f) } else { None }) {
            for v in &fd.vars {
                if let Some(init) = &v.init {
                    self.register_locals(file, t, init, &format!("{id}."), Scope::default());
                }
            }
        }
        t
    }

    fn add_field(&mut self, file: usize, t: TypeId, name: &str, tok: usize, ty: Option<TypeRef>, dims: u32) {
        let id = format!("{}.{name}.", self.types[t].id);
        let i = self.types[t].fields.len();
        self.types[t].fields.push(FieldInfo { name: name.to_string(), id, ty, dims });
        self.field_at.insert((file, tok), (t, i));
    }

    fn add_method(&mut self, file: usize, t: TypeId, md: &MethodDecl, id: String) {
        let tparams: Vec<(String, String)> =
            md.type_params.iter().map(|p| (p.name.clone(), format!("{id}{}", p.name))).collect();
        let i = self.types[t].methods.len();
        self.types[t].methods.push(MethodInfo {
            name: md.name.clone(),
            id: id.clone(),
            arity: md.params.len(),
            varargs: md.varargs,
            is_ctor: md.is_ctor,
            ret: md.ret.clone(),
            tparams: tparams.clone(),
            locals: Vec::new(),
        });
        self.method_at.insert((file, md.name_tok), (t, i));
        if let Some(body) = &md.body {
            let outer_scope = self.types[t].local_scope.clone().unwrap_or_default();
            let mut scope = outer_scope;
            scope.tparams.extend(tparams);
            let locals = self.register_locals(file, t, body, &id, scope);
            self.types[t].methods[i].locals = locals;
        }
    }

    /// Registers the local types of `body`; ids are `prefix + name`. A local
    /// type sees the siblings declared before it.
    fn register_locals(&mut self, file: usize, t: TypeId, body: &Body, prefix: &str, mut scope: Scope) -> Vec<(String, TypeId)> {
        let mut ids = Vec::new();
        for decl in &body.local_types {
            let lt = self.register(file, decl, Some(t), format!("{prefix}{}", decl.name), None, Some(scope.clone()));
            scope.types.push((decl.name.clone(), lt));
            ids.push((decl.name.clone(), lt));
        }
        ids
    }

    fn super_ctx(&self, t: TypeId) -> Ctx {
        let info = &self.types[t];
        let mut scope = info.local_scope.clone().unwrap_or_default();
        scope.tparams.extend(info.tparams.iter().cloned());
        Ctx { file: info.file, ty: info.outer, scope }
    }

    /// Context for code inside type `t` (field types, member signatures).
    pub fn type_ctx(&self, t: TypeId) -> Ctx {
        Ctx { file: self.types[t].file, ty: Some(t), scope: Scope::default() }
    }

    pub fn method_ctx(&self, t: TypeId, m: usize) -> Ctx {
        let mi = &self.types[t].methods[m];
        Ctx {
            file: self.types[t].file,
            ty: Some(t),
            scope: Scope { tparams: mi.tparams.clone(), types: mi.locals.clone() },
        }
    }

    pub fn resolve_ref(&self, r: &TypeRef, ctx: &Ctx) -> Option<Target> {
        if r.is_primitive() || r.is_var() {
            return None;
        }
        self.resolve_segments(&r.segments, ctx)
    }

    pub fn resolve_segments(&self, segs: &[String], ctx: &Ctx) -> Option<Target> {
        let mut cur = match self.resolve_simple(&segs[0], ctx) {
            Some(t) => t,
            None => return self.resolve_qualified(segs),
        };
        for s in &segs[1..] {
            cur = match cur {
                Target::Type(t) => Target::Type(self.member_type(t, s)?),
                Target::External(f) => Target::External(format!("{f}.{s}")),
                Target::TypeParam(_) => return None,
            };
        }
        Some(cur)
    }

    /// `a.b.C.D`: the longest project prefix, else an external name when the
    /// first segment looks like a package.
    fn resolve_qualified(&self, segs: &[String]) -> Option<Target> {
        for k in (1..=segs.len()).rev() {
            if let Some(&t) = self.by_fqn.get(&segs[..k].join(".")) {
                let mut cur = t;
                for s in &segs[k..] {
                    cur = self.member_type(cur, s)?;
                }
                return Some(Target::Type(cur));
            }
        }
        if segs.len() > 1 && segs[0].chars().next().is_some_and(|c| c.is_lowercase()) {
            return Some(Target::External(segs.join(".")));
        }
        None
    }

    pub fn resolve_simple(&self, name: &str, ctx: &Ctx) -> Option<Target> {
        if let Some((_, id)) = ctx.scope.tparams.iter().rev().find(|(n, _)| n == name) {
            return Some(Target::TypeParam(id.clone()));
        }
        if let Some(&(_, t)) = ctx.scope.types.iter().rev().find(|(n, _)| n == name) {
            return Some(Target::Type(t));
        }
        let mut cur = ctx.ty;
        while let Some(t) = cur {
            let info = &self.types[t];
            if let Some((_, id)) = info.tparams.iter().find(|(n, _)| n == name) {
                return Some(Target::TypeParam(id.clone()));
            }
            if info.simple == name {
                return Some(Target::Type(t));
            }
            if let Some(m) = self.member_type(t, name) {
                return Some(Target::Type(m));
            }
            if let Some(s) = &info.local_scope {
                if let Some((_, id)) = s.tparams.iter().rev().find(|(n, _)| n == name) {
                    return Some(Target::TypeParam(id.clone()));
                }
                if let Some(&(_, lt)) = s.types.iter().rev().find(|(n, _)| n == name) {
                    return Some(Target::Type(lt));
                }
            }
            cur = info.outer;
        }
        let (package, imports) = &self.files[ctx.file];
        for imp in imports.iter().filter(|i| !i.wildcard && !i.is_static) {
            if imp.path.rsplit('.').next() == Some(name) {
                return Some(self.by_path(&imp.path));
            }
        }
        if let Some(&t) = self.by_fqn.get(&qualify(package, name)) {
            return Some(Target::Type(t));
        }
        for imp in imports.iter().filter(|i| i.wildcard && !i.is_static) {
            if let Some(&t) = self.by_fqn.get(&format!("{}.{name}", imp.path)) {
                return Some(Target::Type(t));
            }
        }
        if JAVA_LANG.contains(&name) {
            return Some(Target::External(format!("java.lang.{name}")));
        }
        if !name.chars().next().is_some_and(|c| c.is_uppercase()) {
            return None;
        }
        // a lone on-demand import of an outside package is the only candidate
        let external: Vec<&Import> = imports
            .iter()
            .filter(|i| i.wildcard && !i.is_static && !self.packages.contains(&i.path) && !self.by_fqn.contains_key(&i.path))
            .collect();
        if let [only] = external.as_slice() {
            return Some(Target::External(format!("{}.{name}", only.path)));
        }
        None
    }

    fn by_path(&self, path: &str) -> Target {
        match self.by_fqn.get(path) {
            Some(&t) => Target::Type(t),
            None => Target::External(path.to_string()),
        }
    }

    /// Member type `name` of `t` or of one of its project supertypes.
    pub fn member_type(&self, t: TypeId, name: &str) -> Option<TypeId> {
        self.walk_supers(t, |info| info.member_types.get(name).copied())
    }

    /// Breadth-first over `t` and its project supertypes; first hit wins.
    pub fn walk_supers<R>(&self, t: TypeId, mut f: impl FnMut(&TypeInfo) -> Option<R>) -> Option<R> {
        let mut seen = HashSet::new();
        let mut queue = std::collections::VecDeque::from([t]);
        while let Some(cur) = queue.pop_front() {
            if !seen.insert(cur) {
                continue;
            }
            let info = &self.types[cur];
            if let Some(r) = f(info) {
                return Some(r);
            }
            for s in &info.supers {
                if let Target::Type(st) = s {
                    queue.push_back(*st);
                }
            }
        }
        None
    }

    /// The first external supertype reachable from `t`, if any.
    pub fn external_super(&self, t: TypeId) -> Option<String> {
        self.walk_supers(t, |info| {
            info.supers.iter().find_map(|s| if let Target::External(f) = s { Some(f.clone()) } else { None })
        })
    }

    pub fn find_field(&self, t: TypeId, name: &str) -> Option<(TypeId, usize)> {
        self.walk_supers_ids(t)
            .into_iter()
            .find_map(|c| self.types[c].fields.iter().position(|f| f.name == name).map(|i| (c, i)))
    }

    /// `t` followed by its project supertypes, breadth-first.
    pub fn walk_supers_ids(&self, t: TypeId) -> Vec<TypeId> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut queue = std::collections::VecDeque::from([t]);
        while let Some(cur) = queue.pop_front() {
            if !seen.insert(cur) {
                continue;
            }
            out.push(cur);
            for s in &self.types[cur].supers {
                if let Target::Type(st) = s {
                    queue.push_back(*st);
                }
            }
        }
        out
    }

    /// Method `name` callable with `arity` arguments on `t`, searching its
    /// project supertypes; an exact arity match anywhere beats a name match.
    pub fn find_method(&self, t: TypeId, name: &str, arity: Option<usize>) -> Option<(TypeId, usize)> {
        let chain = self.walk_supers_ids(t);
        if let Some(a) = arity {
            for &c in &chain {
                if let Some(i) = self.types[c].methods.iter().position(|m| !m.is_ctor && m.name == name && m.accepts(a)) {
                    return Some((c, i));
                }
            }
        }
        for &c in &chain {
            if let Some(i) = self.types[c].methods.iter().position(|m| !m.is_ctor && m.name == name) {
                return Some((c, i));
            }
        }
        None
    }

    pub fn find_ctor(&self, t: TypeId, arity: usize) -> Option<usize> {
        let ms = &self.types[t].methods;
        ms.iter().position(|m| m.is_ctor && m.accepts(arity))
    }

    pub fn has_ctors(&self, t: TypeId) -> bool {
        self.types[t].methods.iter().any(|m| m.is_ctor)
    }

    /// Direct supertypes of `t` that are in the project, in declaration order.
    pub fn project_supers(&self, t: TypeId) -> Vec<TypeId> {
        self.types[t].supers.iter().filter_map(|s| if let Target::Type(x) = s { Some(*x) } else { None }).collect()
    }

    /// Static type for a declared variable of type `r` seen from `ctx`.
    pub fn ty_of(&self, r: Option<&TypeRef>, dims: u32, ctx: &Ctx) -> Ty {
        let Some(r) = r else { return Ty::Unknown };
        if dims > 0 {
            return Ty::Array;
        }
        match self.resolve_ref(r, ctx) {
            Some(Target::Type(t)) => Ty::Type(t),
            Some(Target::External(f)) => Ty::External(f),
            _ => Ty::Unknown,
        }
    }

    pub fn field_ty(&self, t: TypeId, f: usize) -> Ty {
        let fi = &self.types[t].fields[f];
        if fi.ty.is_none() {
            // enum constant
            return Ty::Type(t);
        }
        self.ty_of(fi.ty.as_ref(), fi.dims, &self.type_ctx(t))
    }

    pub fn return_ty(&self, t: TypeId, m: usize) -> Ty {
        let mi = &self.types[t].methods[m];
        let Some(r) = &mi.ret else { return Ty::Type(t) };
        self.ty_of(Some(r), r.dims, &self.method_ctx(t, m))
    }
}

pub fn qualify(package: &str, name: &str) -> String {
    if package.is_empty() {
        name.to_string()
    } else {
        format!("{package}.{name}")
    }
}
