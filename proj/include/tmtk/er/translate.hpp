#ifndef TMTK_ER_TRANSLATE_HPP
#define TMTK_ER_TRANSLATE_HPP

#include "tmtk/core/model.hpp"
#include "tmtk/er/schema.hpp"

namespace tmtk::er {

/// Entity set name: entity name + "S" unless it already ends in s/S.
std::string pluralize(std::string_view entity_name);

/// Mechanical ER -> TM translation:
///   R1  each entity becomes a set thimac (pluralized name) holding an
///       individual which holds one attribute subthimac per attribute; all
///       three levels carry an explicit create.
///   R2  a many-endpoint facing a one-endpoint adds a Sub<Entities> subset
///       inside the entity set (both sides for m-n); the subset carries a
///       representative individual so it is a well-formed set.
///   R3  each relationship/role becomes a relationship thimac with one
///       participant per endpoint (individual for one, subset for many),
///       boundary stages, and flows from the entity individual's transfer_out
///       into the participant's transfer_in.
///   R4  for 1-n / n-1, the one-side participant gains a "uniqueness"
///       attribute subthimac.
/// Entities appear in declaration order, then relationships, then roles.
core::StaticModel translate_er(const ERSchema& schema);

/// The two-tuple constraint as a machine: a relationship thimac holding two
/// tuple participants, a compare machine with kernel compare_eq over the lhs
/// attributes, and a guard="equal" trigger into an assert_eq machine over the
/// rhs attributes.
core::StaticModel fd_to_tm(const FD& fd);

}  // namespace tmtk::er

#endif
