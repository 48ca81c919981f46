#ifndef COBAREXT_SCENARIOS_HPP
#define COBAREXT_SCENARIOS_HPP
#endif
