use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::RwLock;

/// Interned variable name. Ordering follows registration order; the metric
/// parameters `h11 < h12 < h13 < h22 < h23 < h33 < q < t < u` are
/// pre-registered so the canonical monomial order is fixed across runs.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(u32);

struct Registry {
    names: Vec<&'static str>,
    by_name: HashMap<&'static str, u32>,
}

static REGISTRY: Lazy<RwLock<Registry>> = Lazy::new(|| {
    let mut reg = Registry {
        names: Vec::new(),
        by_name: HashMap::new(),
    };
    for name in ["h11", "h12", "h13", "h22", "h23", "h33", "q", "t", "u"] {
        let id = reg.names.len() as u32;
        reg.names.push(name);
        reg.by_name.insert(name, id);
    }
    RwLock::new(reg)
});

/// Intern `name`, returning its id.
pub fn var(name: &str) -> VarId {
    {
        let reg = REGISTRY.read().unwrap();
        if let Some(&id) = reg.by_name.get(name) {
            return VarId(id);
        }
    }
    let mut reg = REGISTRY.write().unwrap();
    if let Some(&id) = reg.by_name.get(name) {
        return VarId(id);
    }
    let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
    let id = reg.names.len() as u32;
    reg.names.push(leaked);
    reg.by_name.insert(leaked, id);
    VarId(id)
}

/// Name of an interned variable.
pub fn var_name(id: VarId) -> &'static str {
    REGISTRY.read().unwrap().names[id.0 as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_parameters_are_ordered() {
        assert!(var("h11") < var("h12"));
        assert!(var("h12") < var("h22"));
        assert!(var("h33") < var("q"));
        assert_eq!(var("h23"), var("h23"));
        assert_eq!(var_name(var("h23")), "h23");
    }
}
