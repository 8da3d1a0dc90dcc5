#pragma once
// Generated by tests/oracles/generate.py; do not edit.

namespace oracle {

inline constexpr double kRBar = 0.83355655960096469844;
inline constexpr double kTau0 = 2.1716229808875015099;

struct FamilyRow {
  double R, omega, r_minus, r_plus, alpha, xi_max, tau_minus, tau_plus, grad_minus, lower_radius;
};

inline constexpr FamilyRow kFamily[] = {
    {0.0, 0.0, -0.83355655960096469844, 0.83355655960096469844, 0.46048508825013391086, 0.46048508825013391086, 2.1716229808875015099, 2.1716229808875015099, 1.0, 1.0},
    {0.1, 0.20134544874117659074, -0.78836630584438219713, 0.87322938044630535021, 0.42553288347384001734, 0.42983119542812122963, 2.0412043922692528978, 2.3264947045176147031, 0.87737332404222466917, 0.87737332404222466917},
    {0.2, 0.41106588738741552432, -0.73747285284028876295, 0.90747445202252811415, 0.38123661530308595968, 0.39712147427404787466, 1.9274320287133470396, 2.5181211915775530167, 0.76542464880566335087, 0.76542464880566335087},
    {0.3, 0.6391899338734413858, -0.68056790227692157006, 0.93630528275947302173, 0.32881838798348161907, 0.36133888789393584513, 1.8249569359493172535, 2.7674851323877738055, 0.65942790969025100565, 0.65942790969025100565},
    {0.4, 0.89983940638407799733, -0.6171791309304726262, 0.95968065392593620954, 0.26975911772968072814, 0.32114180682104848588, 1.72978125665902052, 3.1138891877669330825, 0.55550507816866165767, 0.55550507816866165767},
    {0.5, 1.2159728110007215124, -0.54659975557626967548, 0.97754052475956791048, 0.20601425350707978277, 0.27468567134277304369, 1.6385586337610251254, 3.6405248046306945224, 0.45008857834914417038, 0.45008857834914417038},
    {0.6, 1.6306471805599453094, -0.46776037474267156121, 0.989884195505519744, 0.14044248500958763684, 0.21944138282748068257, 1.5480157088604713884, 4.5570256034440639057, 0.33969870779100458204, 0.33969870779100458204},
    {0.7, 2.2398495473018963317, -0.3789731220925677268, 0.99695478784816265915, 0.07774426402830535436, 0.15243973338883402816, 1.4542151589033094115, 6.5599694893801777969, 0.22168017111322139755, 0.22168017111322139755},
    {0.8, 3.3208345108903319136, -0.27734354544188953746, 0.99964712768724028497, 0.026554137284336851019, 0.07376149245649125283, 1.3510288894464131475, 13.5572094150597237, 0.099653907237403358157, 0.099653907237403358157},
    {0.9, 6.2090615948463781247, -0.1570494388656046586, 0.9999989052436665916, 0.001479698170021474702, 0.0077878851053761826421, 1.2250116019232387657, 128.40456509940980074, 0.009540249608531008638, 0.009540249608531008638},
};

}  // namespace oracle
