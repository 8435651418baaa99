#include "RigidBody.h"
#include <Engine/Core/Profiler.h>
#include <btBulletDynamicsCommon.h>

// RigidBody
