//! Typed identifiers for the four disjoint name spaces of a system model.
//!
//! Each identifier is an ordinal into the owning [`SystemSpec`]'s name
//! tables; ordinals are dense per kind, which lets every cache and label
//! set be a bit set. Cross-kind comparison is a compile error by
//! construction.
//!
//! [`SystemSpec`]: crate::model::SystemSpec

macro_rules! ordinal_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u32);

        impl $name {
            pub(crate) fn new(index: usize) -> Self {
                $name(index as u32)
            }

            /// Dense ordinal of this identifier within its kind.
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

ordinal_id!(
    /// A named distributed computation that migrates between servers.
    AgentId
);
ordinal_id!(
    /// A named sequential component holding a state and offering services.
    ServerId
);
ordinal_id!(
    /// A service name callable on a server.
    ServiceId
);
ordinal_id!(
    /// A state value a server can hold.
    StateId
);
ordinal_id!(
    /// An action rule, numbered in source order after template expansion.
    ActionId
);
