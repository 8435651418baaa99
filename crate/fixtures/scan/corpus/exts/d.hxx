#include "e.inl"
