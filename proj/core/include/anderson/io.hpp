#ifndef ANDERSON_IO_HPP
#define ANDERSON_IO_HPP

#include <string>

#include "anderson/motive.hpp"

namespace anderson {

// Line-oriented motive files:
//   q <int>        prime power
//   e <int>        base field degree, L = F_{q^e}
//   theta <int>    field element, base-p digit encoding
//   r <int>        rank
//   row <entry>;<entry>;...   (r lines of r entries)
// An entry [c0,c1,...,ck] is sum c_j t^j with each c_j in [0, q^e) encoding a
// field element by base-p digits against the canonical modulus of F_{q^e}.
// '#' starts a comment.
Motive parse_motive(const std::string& text);

// canonical serialization; parse(serialize(m)) round-trips byte-identically
std::string serialize_motive(const Motive& m);

// a place flag: bracketed monic coefficient list over F_q, or "inf"
Place parse_place(const std::string& text, const FieldDescriptor* fq);
std::string serialize_place(const Place& p);

} // namespace anderson

#endif
