#pragma once

#include <json.hpp>

#include "hotbang/quad.hpp"
#include "hotbang/states.hpp"
#include "hotbang/testfn.hpp"
#include "hotbang/thermal.hpp"
#include "hotbang/verify.hpp"

namespace hb {

using json = nlohmann::ordered_json;

// Complex numbers are [re, im]; four-vectors are [x0, x1, x2, x3].
json to_json(cplx z);
cplx cplx_from_json(const json& j);
json to_json(const FourVector& v);
FourVector four_from_json(const json& j);

// {"center":[..], "half_widths":[..], "amplitude":[[re,im],[re,im]], "scale":[re,im]}
json to_json(const Bump& b);
Bump bump_from_json(const json& j);
// {"terms":[bump, ...]}
json to_json(const TestFunction& f);
TestFunction testfn_from_json(const json& j);

// {"vacuum":{}} | {"kms":{"beta":[..]}} | {"mixture":{"atoms":[{"w":w,"beta":[..]}]}}
// | {"hotbang":{"lambda":l}}
json to_json(const StateSpec& s);
StateSpec state_from_json(const json& j);

// {"t2":{}} | {"energy":{"mu":0,"nu":0}} | {"entropy":{"mu":0}} | {"phasespace":{"p":[..]}}
json to_json(const MacroObservable& xi);
MacroObservable observable_from_json(const json& j);

json to_json(const QuadConfig& q);
// Missing keys keep their defaults; the result is validated.
QuadConfig quad_from_json(const json& j, QuadConfig base = {});

json to_json(const CheckReport& r);

// Errors in user-supplied JSON.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hb
