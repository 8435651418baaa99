#include "d.hxx"
