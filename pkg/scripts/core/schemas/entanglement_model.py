from typing import List

from pydantic import BaseModel, model_validator

from scripts.exceptions.module_exception import ArgumentError


class BipartitionSpec(BaseModel):
    keep_sites: List[int]
    traced_sites: List[int]

    @model_validator(mode="after")
    def check_partition(self):
        keep, traced = set(self.keep_sites), set(self.traced_sites)
        if len(keep) != len(self.keep_sites) or len(traced) != len(self.traced_sites):
            raise ArgumentError("bipartition lists a site twice")
        if keep & traced:
            raise ArgumentError(f"sites {sorted(keep & traced)} are both kept and traced")
        if not self.keep_sites:
            raise ArgumentError("bipartition must keep at least one site")
        return self

    @classmethod
    def keep(cls, keep_sites: List[int], n_sites: int) -> "BipartitionSpec":
        traced = [site for site in range(1, n_sites + 1) if site not in keep_sites]
        return cls(keep_sites=list(keep_sites), traced_sites=traced)

    @property
    def n_sites(self) -> int:
        return len(self.keep_sites) + len(self.traced_sites)
