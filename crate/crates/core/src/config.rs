//! Declarative experiment configuration (TOML).
//!
//! Groups are declared under `[groups.NAME]`, wreath products under
//! `[wreaths.NAME]`, and each subcommand reads its own section. Errors name
//! the offending key as a dotted path.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind, MarkedGroup};
use crate::rational::{self, Rational};
use crate::wreath::{WreathContext, WreathElement};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::config(
                "format",
                format!("expected csv or json, got {s:?}"),
            )),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

/// An integer or a `"p/q"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDecl {
    kind: String,
    modulus: Option<u64>,
    rank: Option<u32>,
    table: Option<Vec<Vec<u32>>>,
    left: Option<String>,
    right: Option<String>,
    inner: Option<String>,
    generators: Option<Vec<toml::Value>>,
    virtually_z: Option<VzDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VzDecl {
    t: toml::Value,
    coset_reps: Vec<toml::Value>,
    distortion: Option<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WreathDecl {
    fiber: String,
    base: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrowthDecl {
    targets: Vec<String>,
    radii: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthDecl {
    targets: Vec<LengthTargetDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthTargetDecl {
    group: Option<String>,
    wreath: Option<String>,
    element: toml::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentsDecl {
    wreath: String,
    window: Num,
    #[serde(default = "yes")]
    kernel: bool,
    radii: Vec<Num>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDecl {
    wreath: String,
    window: Num,
    radii: Vec<Num>,
    combine_window: Num,
    combine_radius: Num,
    interval: [i64; 2],
    block: i64,
    pad: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeDecl {
    wreath: String,
    n: usize,
    radii: Vec<Num>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeMode {
    #[default]
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub mode: LatticeMode,
    #[serde(default = "default_samples")]
    pub samples: u64,
}

fn default_samples() -> u64 {
    1000
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    groups: BTreeMap<String, GroupDecl>,
    #[serde(default)]
    wreaths: BTreeMap<String, WreathDecl>,
    growth: Option<GrowthDecl>,
    length: Option<LengthDecl>,
    components: Option<ComponentsDecl>,
    control: Option<ControlDecl>,
    cube: Option<CubeDecl>,
    lattice: Option<LatticeSection>,
}

#[derive(Clone, Debug)]
pub struct GrowthSection {
    pub targets: Vec<String>,
    pub radii: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub enum LengthTarget {
    Group {
        name: String,
        element: GroupElement,
    },
    Wreath {
        name: String,
        element: WreathElement,
    },
}

#[derive(Clone, Debug)]
pub struct ComponentsSection {
    pub wreath: String,
    pub window: Rational,
    pub kernel: bool,
    pub radii: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct ControlSection {
    pub wreath: String,
    pub window: Rational,
    pub radii: Vec<Rational>,
    pub combine_window: Rational,
    pub combine_radius: Rational,
    pub interval: (i64, i64),
    pub block: i64,
    pub pad: i64,
}

#[derive(Clone, Debug)]
pub struct CubeSection {
    pub wreath: String,
    pub n: usize,
    pub radii: Vec<Rational>,
}

/// A validated configuration with every group built.
#[derive(Debug)]
pub struct Config {
    pub run: RunSection,
    pub groups: BTreeMap<String, MarkedGroup>,
    pub wreaths: BTreeMap<String, WreathContext>,
    pub growth: Option<GrowthSection>,
    pub length: Option<Vec<LengthTarget>>,
    pub components: Option<ComponentsSection>,
    pub control: Option<ControlSection>,
    pub cube: Option<CubeSection>,
    pub lattice: Option<LatticeSection>,
}

/// Dotted key of the line holding byte `at`, for syntax errors.
fn key_at(src: &str, at: usize) -> String {
    let upto = &src[..at.min(src.len())];
    let line_start = upto.rfind('\n').map_or(0, |i| i + 1);
    let line = src[line_start..].lines().next().unwrap_or("").trim();
    let header = upto[..line_start]
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('['))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').trim().to_string());
    let key = line
        .split_once('=')
        .map(|(k, _)| k.trim().to_string())
        .unwrap_or_else(|| line.trim_matches(|c| c == '[' || c == ']').to_string());
    match header {
        Some(h) if !line.starts_with('[') => format!("{h}.{key}"),
        _ => key,
    }
}

fn num(v: &Num, key: &str) -> Result<Rational> {
    match v {
        Num::Int(i) => Ok(rational::int(*i)),
        Num::Text(s) => rational::parse(s).map_err(|e| Error::config(key, e.to_string())),
    }
}

fn radius(v: &Num, key: &str) -> Result<Rational> {
    let r = num(v, key)?;
    if r <= Rational::default() {
        return Err(Error::config(
            key,
            format!("radius must be positive, got {r}"),
        ));
    }
    Ok(r)
}

fn radii(v: &[Num], key: &str) -> Result<Vec<Rational>> {
    if v.is_empty() {
        return Err(Error::config(key, "at least one radius required"));
    }
    v.iter()
        .enumerate()
        .map(|(i, x)| radius(x, &format!("{key}[{i}]")))
        .collect()
}

fn int_value(v: &toml::Value, key: &str) -> Result<i64> {
    v.as_integer()
        .ok_or_else(|| Error::config(key, format!("expected an integer, got {v}")))
}

/// Reads `"a b^-1 a^2"`; `"1"` and `""` are the identity.
fn free_word(g: &MarkedGroup, rank: u32, s: &str, key: &str) -> Result<GroupElement> {
    let mut out = g.identity();
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars == ['1'] {
        return Ok(out);
    }
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let letter = (c as u32).wrapping_sub('a' as u32);
        if !c.is_ascii_lowercase() || letter >= rank {
            return Err(Error::config(
                key,
                format!("{c:?} is not one of the {rank} free letters"),
            ));
        }
        i += 1;
        let mut power = 1i64;
        if chars.get(i) == Some(&'^') {
            let start = i + 1;
            let mut end = start;
            while end < chars.len()
                && (chars[end].is_ascii_digit() || (end == start && chars[end] == '-'))
            {
                end += 1;
            }
            let text: String = chars[start..end].iter().collect();
            power = text
                .parse()
                .map_err(|_| Error::config(key, format!("bad exponent {text:?}")))?;
            i = end;
        }
        let x = GroupElement::Word(vec![letter as i32 + 1]);
        out = g.mul(&out, &g.pow(&x, power));
    }
    Ok(out)
}

/// Reads an element literal for `g`: an integer for ℤ, ℤ/n and tables, a
/// word string or list of signed letter numbers for free groups, a
/// two-element array for products, and `{ coset, exp }` for virtually-ℤ
/// wrappers.
pub fn element(g: &MarkedGroup, v: &toml::Value, key: &str) -> Result<GroupElement> {
    let e = match g.kind() {
        GroupKind::Integers => GroupElement::Int(int_value(v, key)?),
        GroupKind::Cyclic { .. } => {
            let x = int_value(v, key)?;
            GroupElement::Residue(
                u64::try_from(x).map_err(|_| Error::config(key, "residue must be nonnegative"))?,
            )
        }
        GroupKind::Table { .. } => {
            let x = int_value(v, key)?;
            GroupElement::Row(
                u32::try_from(x).map_err(|_| Error::config(key, "row must be nonnegative"))?,
            )
        }
        GroupKind::Free { rank } => match v {
            toml::Value::String(s) => free_word(g, *rank, s, key)?,
            toml::Value::Array(xs) => {
                let mut out = g.identity();
                for (i, x) in xs.iter().enumerate() {
                    let k = format!("{key}[{i}]");
                    let l = int_value(x, &k)?;
                    if l == 0 || l.unsigned_abs() > *rank as u64 {
                        return Err(Error::config(
                            k,
                            format!("letter {l} out of range for rank {rank}"),
                        ));
                    }
                    out = g.mul(&out, &GroupElement::Word(vec![l as i32]));
                }
                out
            }
            _ => {
                return Err(Error::config(
                    key,
                    "expected a word string or a list of letters",
                ))
            }
        },
        GroupKind::Product(a, b) => match v.as_array().map(Vec::as_slice) {
            Some([x, y]) => GroupElement::Pair(
                Box::new(element(a, x, &format!("{key}[0]"))?),
                Box::new(element(b, y, &format!("{key}[1]"))?),
            ),
            _ => return Err(Error::config(key, "expected a pair [left, right]")),
        },
        GroupKind::VirtuallyZ(_) => {
            let t = v
                .as_table()
                .ok_or_else(|| Error::config(key, "expected { coset = i, exp = e }"))?;
            for k in t.keys() {
                if k != "coset" && k != "exp" {
                    return Err(Error::config(format!("{key}.{k}"), "unknown field"));
                }
            }
            let get = |k: &str| {
                t.get(k)
                    .ok_or_else(|| Error::config(format!("{key}.{k}"), "missing"))
                    .and_then(|x| int_value(x, &format!("{key}.{k}")))
            };
            let coset = u32::try_from(get("coset")?)
                .map_err(|_| Error::config(format!("{key}.coset"), "out of range"))?;
            GroupElement::Vz {
                coset,
                exp: get("exp")?,
            }
        }
    };
    g.validate(&e)
        .map_err(|err| Error::config(key, err.to_string()))?;
    Ok(e)
}

/// Reads `{ lamps = [[g, h], ...], cursor = g }`.
pub fn wreath_element(ctx: &WreathContext, v: &toml::Value, key: &str) -> Result<WreathElement> {
    let t = v
        .as_table()
        .ok_or_else(|| Error::config(key, "expected { lamps = [[g, h], ...], cursor = g }"))?;
    for k in t.keys() {
        if k != "lamps" && k != "cursor" {
            return Err(Error::config(format!("{key}.{k}"), "unknown field"));
        }
    }
    let cursor = match t.get("cursor") {
        Some(c) => element(ctx.base(), c, &format!("{key}.cursor"))?,
        None => ctx.base().identity(),
    };
    let mut w = WreathElement {
        lamps: BTreeMap::new(),
        cursor,
    };
    let empty = Vec::new();
    let lamps = match t.get("lamps") {
        Some(l) => l
            .as_array()
            .ok_or_else(|| Error::config(format!("{key}.lamps"), "expected an array"))?,
        None => &empty,
    };
    for (i, pair) in lamps.iter().enumerate() {
        let k = format!("{key}.lamps[{i}]");
        let Some([g, h]) = pair.as_array().map(Vec::as_slice) else {
            return Err(Error::config(k, "expected [position, value]"));
        };
        let g = element(ctx.base(), g, &format!("{k}[0]"))?;
        let h = element(ctx.fiber(), h, &format!("{k}[1]"))?;
        if h == ctx.fiber().identity() {
            return Err(Error::config(k, "lamp value must not be the identity"));
        }
        if w.lamps.insert(g, h).is_some() {
            return Err(Error::config(k, "position listed twice"));
        }
    }
    Ok(w)
}

struct Builder<'a> {
    decls: &'a BTreeMap<String, GroupDecl>,
    built: BTreeMap<String, MarkedGroup>,
    visiting: Vec<String>,
}

impl Builder<'_> {
    fn get(&mut self, name: &str, key: &str) -> Result<MarkedGroup> {
        if let Some(g) = self.built.get(name) {
            return Ok(g.clone());
        }
        let Some(decl) = self.decls.get(name) else {
            return Err(Error::config(key, format!("unknown group `{name}`")));
        };
        if self.visiting.iter().any(|v| v == name) {
            return Err(Error::config(
                key,
                format!("group `{name}` refers to itself"),
            ));
        }
        self.visiting.push(name.to_string());
        let g = self.build(name, decl)?;
        self.visiting.pop();
        self.built.insert(name.to_string(), g.clone());
        Ok(g)
    }

    fn build(&mut self, name: &str, d: &GroupDecl) -> Result<MarkedGroup> {
        let key = |k: &str| format!("groups.{name}.{k}");
        let allowed: &[&str] = match d.kind.as_str() {
            "integers" => &[],
            "cyclic" => &["modulus"],
            "free" => &["rank"],
            "table" => &["table"],
            "product" => &["left", "right"],
            "virtually_z" => &["inner"],
            other => {
                return Err(Error::config(
                    key("kind"),
                    format!("unknown kind {other:?}; expected integers, cyclic, free, table, product or virtually_z"),
                ))
            }
        };
        let present = [
            ("modulus", d.modulus.is_some()),
            ("rank", d.rank.is_some()),
            ("table", d.table.is_some()),
            ("left", d.left.is_some()),
            ("right", d.right.is_some()),
            ("inner", d.inner.is_some()),
        ];
        for (field, set) in present {
            if set && !allowed.contains(&field) {
                return Err(Error::config(
                    key(field),
                    format!("not a parameter of kind {:?}", d.kind),
                ));
            }
            if !set && allowed.contains(&field) {
                return Err(Error::config(
                    key(field),
                    format!("required for kind {:?}", d.kind),
                ));
            }
        }
        let wrap = |e: Error, k: &str| match e {
            Error::Config { .. } => e,
            other => Error::config(key(k), other.to_string()),
        };
        let mut g = match d.kind.as_str() {
            "integers" => MarkedGroup::integers(),
            "cyclic" => MarkedGroup::cyclic(d.modulus.unwrap()).map_err(|e| wrap(e, "modulus"))?,
            "free" => MarkedGroup::free(d.rank.unwrap()),
            "table" => {
                MarkedGroup::table(d.table.clone().unwrap()).map_err(|e| wrap(e, "table"))?
            }
            "product" => {
                let l = self.get(d.left.as_ref().unwrap(), &key("left"))?;
                let r = self.get(d.right.as_ref().unwrap(), &key("right"))?;
                MarkedGroup::product(l, r)
            }
            _ => {
                let inner = self.get(d.inner.as_ref().unwrap(), &key("inner"))?;
                MarkedGroup::virtually_z_wrapper(inner).map_err(|e| wrap(e, "inner"))?
            }
        };
        if let Some(gens) = &d.generators {
            let gens = gens
                .iter()
                .enumerate()
                .map(|(i, v)| element(&g, v, &key(&format!("generators[{i}]"))))
                .collect::<Result<Vec<_>>>()?;
            g = g.with_generators(gens).map_err(|e| wrap(e, "generators"))?;
        }
        if let Some(vz) = &d.virtually_z {
            let t = element(&g, &vz.t, &key("virtually_z.t"))?;
            let reps = vz
                .coset_reps
                .iter()
                .enumerate()
                .map(|(i, v)| element(&g, v, &key(&format!("virtually_z.coset_reps[{i}]"))))
                .collect::<Result<Vec<_>>>()?;
            let c = vz
                .distortion
                .as_ref()
                .map(|c| num(c, &key("virtually_z.distortion")))
                .transpose()?;
            g = g
                .with_virtually_z(t, reps, c)
                .map_err(|e| wrap(e, "virtually_z"))?;
        }
        Ok(g)
    }
}

impl Config {
    pub fn from_toml(src: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(src).map_err(|e| syntax(src, e))?;
        let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = inner.message().to_string();
            let key = if path != "." {
                path
            } else if let Some(rest) = message.strip_prefix("unknown field `") {
                rest.split('`').next().unwrap_or_default().to_string()
            } else {
                inner
                    .span()
                    .map(|s| key_at(src, s.start))
                    .unwrap_or_default()
            };
            Error::config(key, message)
        })?;
        Config::resolve(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Config::from_toml(&src)
    }

    fn resolve(raw: RawConfig) -> Result<Self> {
        let mut b = Builder {
            decls: &raw.groups,
            built: BTreeMap::new(),
            visiting: Vec::new(),
        };
        for name in raw.groups.keys() {
            b.get(name, &format!("groups.{name}"))?;
        }
        let groups = b.built;
        let mut wreaths = BTreeMap::new();
        for (name, d) in &raw.wreaths {
            let key = |k: &str| format!("wreaths.{name}.{k}");
            if groups.contains_key(name) {
                return Err(Error::config(
                    format!("wreaths.{name}"),
                    "name already used by a group",
                ));
            }
            let fiber = groups.get(&d.fiber).ok_or_else(|| {
                Error::config(key("fiber"), format!("unknown group `{}`", d.fiber))
            })?;
            let base = groups
                .get(&d.base)
                .ok_or_else(|| Error::config(key("base"), format!("unknown group `{}`", d.base)))?;
            let ctx = WreathContext::new(fiber.clone(), base.clone())
                .map_err(|e| Error::config(key("fiber"), e.to_string()))?;
            wreaths.insert(name.clone(), ctx);
        }
        let wreath = |name: &str, key: &str| {
            if wreaths.contains_key(name) {
                Ok(name.to_string())
            } else {
                Err(Error::config(key, format!("unknown wreath `{name}`")))
            }
        };

        let growth = raw
            .growth
            .map(|g| {
                for (i, t) in g.targets.iter().enumerate() {
                    if !groups.contains_key(t) && !wreaths.contains_key(t) {
                        return Err(Error::config(
                            format!("growth.targets[{i}]"),
                            format!("unknown group or wreath `{t}`"),
                        ));
                    }
                }
                Ok(GrowthSection {
                    targets: g.targets,
                    radii: radii(&g.radii, "growth.radii")?,
                })
            })
            .transpose()?;

        let length = raw
            .length
            .map(|l| {
                l.targets
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let key = format!("length.targets[{i}]");
                        match (&t.group, &t.wreath) {
                            (Some(name), None) => {
                                let g = groups.get(name).ok_or_else(|| {
                                    Error::config(
                                        format!("{key}.group"),
                                        format!("unknown group `{name}`"),
                                    )
                                })?;
                                Ok(LengthTarget::Group {
                                    name: name.clone(),
                                    element: element(g, &t.element, &format!("{key}.element"))?,
                                })
                            }
                            (None, Some(name)) => {
                                let ctx = wreaths.get(name).ok_or_else(|| {
                                    Error::config(
                                        format!("{key}.wreath"),
                                        format!("unknown wreath `{name}`"),
                                    )
                                })?;
                                Ok(LengthTarget::Wreath {
                                    name: name.clone(),
                                    element: wreath_element(
                                        ctx,
                                        &t.element,
                                        &format!("{key}.element"),
                                    )?,
                                })
                            }
                            _ => Err(Error::config(
                                key,
                                "give exactly one of `group` or `wreath`",
                            )),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;

        let components = raw
            .components
            .map(|c| {
                Ok::<_, Error>(ComponentsSection {
                    wreath: wreath(&c.wreath, "components.wreath")?,
                    window: radius(&c.window, "components.window")?,
                    kernel: c.kernel,
                    radii: radii(&c.radii, "components.radii")?,
                })
            })
            .transpose()?;

        let control = raw
            .control
            .map(|c| {
                let [lo, hi] = c.interval;
                if lo > hi {
                    return Err(Error::config(
                        "control.interval",
                        "expected [lo, hi] with lo ≤ hi",
                    ));
                }
                if c.block < 1 {
                    return Err(Error::config("control.block", "must be at least 1"));
                }
                if c.pad < 0 {
                    return Err(Error::config("control.pad", "must be nonnegative"));
                }
                Ok(ControlSection {
                    wreath: wreath(&c.wreath, "control.wreath")?,
                    window: radius(&c.window, "control.window")?,
                    radii: radii(&c.radii, "control.radii")?,
                    combine_window: radius(&c.combine_window, "control.combine_window")?,
                    combine_radius: radius(&c.combine_radius, "control.combine_radius")?,
                    interval: (lo, hi),
                    block: c.block,
                    pad: c.pad,
                })
            })
            .transpose()?;

        let cube = raw
            .cube
            .map(|c| {
                if c.n == 0 {
                    return Err(Error::config("cube.n", "must be at least 1"));
                }
                Ok(CubeSection {
                    wreath: wreath(&c.wreath, "cube.wreath")?,
                    n: c.n,
                    radii: radii(&c.radii, "cube.radii")?,
                })
            })
            .transpose()?;

        if let Some(l) = &raw.lattice {
            if l.n == 0 {
                return Err(Error::config("lattice.n", "must be at least 1"));
            }
            if l.n > 5 {
                return Err(Error::config("lattice.n", "at most 5 parts are supported"));
            }
        }

        Ok(Config {
            run: raw.run,
            groups,
            wreaths,
            growth,
            length,
            components,
            control,
            cube,
            lattice: raw.lattice,
        })
    }

    /// A group or wreath declared under `name`.
    pub fn wreath(&self, name: &str) -> Result<&WreathContext> {
        self.wreaths
            .get(name)
            .ok_or_else(|| Error::config(name, format!("unknown wreath `{name}`")))
    }

    pub fn section<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| Error::config(name, format!("the config has no [{name}] section")))
    }
}

fn syntax(src: &str, e: toml::de::Error) -> Error {
    let key = e.span().map(|s| key_at(src, s.start)).unwrap_or_default();
    Error::config(key, e.message().to_string())
}
