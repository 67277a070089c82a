#pragma once

#include "dnlab/forms.hpp"

namespace dnlab::testing {

// Path a - b - c with unit weights, boundary {a, c}.
inline FormSpec p3() {
  return FormSpec({"a", "b", "c"},
                  {{"a", "b", 1.0}, {"b", "c", 1.0}}, {},
                  {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}}, {"a", "c"},
                  {{"a", 1.0}, {"c", 1.0}});
}

// Star with interior center d and boundary leaves a, b, c.
inline FormSpec s3() {
  return FormSpec({"a", "b", "c", "d"},
                  {{"d", "a", 1.0}, {"d", "b", 1.0}, {"d", "c", 1.0}}, {},
                  {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", 1.0}},
                  {"a", "b", "c"}, {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
}

// Two disjoint edges (reducible).
inline FormSpec two_edges() {
  return FormSpec({"a", "b", "c", "d"},
                  {{"a", "b", 1.0}, {"c", "d", 1.0}}, {},
                  {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", 1.0}},
                  {"a", "c"}, {{"a", 1.0}, {"c", 1.0}});
}

// Five vertices, three boundary, two interior; used for recovery tests.
inline FormSpec grid5() {
  return FormSpec({"f1", "f2", "f3", "g1", "g2"},
                  {{"f1", "g1", 1.0},
                   {"f2", "g1", 0.8},
                   {"f2", "g2", 1.3},
                   {"f3", "g2", 1.0},
                   {"g1", "g2", 0.5},
                   {"f1", "f2", 0.4}},
                  {},
                  {{"f1", 1.0}, {"f2", 1.0}, {"f3", 1.0}, {"g1", 1.0},
                   {"g2", 1.0}},
                  {"f1", "f2", "f3"},
                  {{"f1", 1.0}, {"f2", 1.0}, {"f3", 1.0}});
}

}  // namespace dnlab::testing
