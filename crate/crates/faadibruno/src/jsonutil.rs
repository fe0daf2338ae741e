use serde_json::Value;

use crate::error::{Error, Result};

pub(crate) fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Schema {
        context: format!("missing field \"{key}\""),
    })
}

pub(crate) fn as_object<'a>(
    v: &'a Value,
    what: &str,
) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Schema {
        context: format!("{what} must be a JSON object"),
    })
}

pub(crate) fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Schema {
        context: format!("{what} must be a JSON array"),
    })
}

pub(crate) fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| Error::Schema {
            context: format!("{what} must be a nonnegative integer"),
        })
}

pub(crate) fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::Schema {
        context: format!("{what} must be a string"),
    })
}
